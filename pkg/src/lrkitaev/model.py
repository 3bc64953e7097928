"""Matrix representations of the long-range Kitaev chain.

A chain of N spinless fermion sites with open boundaries, power-law hopping
and pairing ~ 1/|i-j|^alpha, an interpolation angle theta between the
kinetic/pairing sector (sin theta) and the on-site term (2 cos theta), and a
hopping-pairing imbalance epsilon.  Three equivalent single-particle pictures
are built here:

* ``CouplingMatrices`` -- the N x N hopping matrix K (symmetric) and pairing
  matrix Delta (antisymmetric),
* ``BdGMatrix`` -- the 2N x 2N Bogoliubov-de Gennes matrix in the Nambu basis
  (c_1..c_N, c_1^dag..c_N^dag),
* ``MajoranaGenerator`` -- the real antisymmetric 2N x 2N matrix H_M of the
  quadratic Majorana form, whose Hermitian companion i*H_M generates the
  Heisenberg dynamics of Majorana-linear operators.

All constructors are pure functions; returned arrays are marked read-only so
the value objects can be shared freely across threads and processes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModelParams",
    "CouplingMatrices",
    "BdGMatrix",
    "MajoranaGenerator",
    "build_coupling_matrices",
    "build_bdg",
    "build_majorana_generator",
    "majorana_from_nambu_map",
    "particle_hole_swap",
]


@dataclass(frozen=True)
class ModelParams:
    """One parameter point of the open-boundary long-range Kitaev chain.

    Attributes
    ----------
    n : int
        Number of fermionic sites, n >= 2.
    alpha : float
        Power-law decay exponent of hopping and pairing, alpha > 0.
    theta : float
        Interpolation angle in radians, 0 < theta < pi.
    epsilon : float
        Hopping-pairing imbalance; epsilon = -1 switches pairing off
        (plain tight-binding chain).
    """

    n: int
    alpha: float
    theta: float
    epsilon: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not 0 < self.theta < np.pi:
            raise ValueError(f"theta must lie in (0, pi), got {self.theta}")

    @property
    def theta_over_pi(self) -> float:
        return self.theta / np.pi


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CouplingMatrices:
    """Hopping matrix K (symmetric) and pairing matrix Delta (antisymmetric)."""

    params: ModelParams
    hopping: np.ndarray  # K, real symmetric N x N
    pairing: np.ndarray  # Delta, real antisymmetric N x N


@dataclass(frozen=True)
class BdGMatrix:
    """Real symmetric 2N x 2N Bogoliubov-de Gennes matrix.

    Block structure [[K, Delta], [-Delta, -K]]; obeys the particle-hole
    constraint tau_x H^T tau_x = -H exactly by construction, so the spectrum
    is symmetric under E -> -E.
    """

    params: ModelParams
    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.params.n


@dataclass(frozen=True)
class MajoranaGenerator:
    """Real antisymmetric 2N x 2N generator H_M of the Majorana quadratic form.

    Majorana indices interleave sites: (site-1 real, site-1 imaginary,
    site-2 real, ...), i.e. modes 2j-1 and 2j belong to fermionic site j.
    The Hermitian matrix ``i * matrix`` generates the Heisenberg evolution of
    operators linear in Majorana modes.
    """

    params: ModelParams
    matrix: np.ndarray

    @property
    def liouvillian(self) -> np.ndarray:
        """Hermitian single-particle generator i * H_M (complex array)."""
        return 1j * self.matrix


def build_coupling_matrices(params: ModelParams) -> CouplingMatrices:
    """Populate K and Delta for one parameter point.

    K_ii = 2 cos(theta); K_ij = sin(theta)/|i-j|^alpha for i != j;
    Delta_ij = -(1+epsilon) sin(theta)/|i-j|^alpha for i < j, antisymmetric
    completion, zero diagonal.  Open boundaries: no wrap-around couplings.
    """
    n = params.n
    idx = np.arange(n)
    dist = np.abs(idx[:, None] - idx[None, :]).astype(float)
    decay = np.zeros((n, n))
    off = dist > 0
    # |i-j|^alpha via exp(alpha * log|i-j|), double precision throughout
    decay[off] = np.exp(-params.alpha * np.log(dist[off]))

    hopping = np.sin(params.theta) * decay
    np.fill_diagonal(hopping, 2.0 * np.cos(params.theta))

    upper = np.triu(decay, k=1)
    pairing = -(1.0 + params.epsilon) * np.sin(params.theta) * (upper - upper.T)

    return CouplingMatrices(params, _readonly(hopping), _readonly(pairing))


def build_bdg(couplings: CouplingMatrices) -> BdGMatrix:
    """Assemble the 2N x 2N BdG matrix [[K, Delta], [-Delta, -K]]."""
    k, d = couplings.hopping, couplings.pairing
    matrix = np.block([[k, d], [-d, -k]])
    return BdGMatrix(couplings.params, _readonly(matrix))


def majorana_from_nambu_map(n: int) -> np.ndarray:
    """Unitary Omega with gamma = Omega @ Psi, Psi = (c_1..c_N, c_1^dag..c_N^dag).

    Row 2j-1 (1-based) realizes gamma_{2j-1} = (c_j + c_j^dag)/sqrt(2) and row
    2j realizes gamma_{2j} = (c_j^dag - c_j)/(i sqrt(2)), giving the
    site-interleaved Majorana ordering.
    """
    omega = np.zeros((2 * n, 2 * n), dtype=complex)
    j = np.arange(n)
    omega[2 * j, j] = 1.0 / np.sqrt(2.0)
    omega[2 * j, n + j] = 1.0 / np.sqrt(2.0)
    omega[2 * j + 1, j] = 1j / np.sqrt(2.0)
    omega[2 * j + 1, n + j] = -1j / np.sqrt(2.0)
    return omega


def build_majorana_generator(couplings: CouplingMatrices) -> MajoranaGenerator:
    """Conjugate the BdG matrix into the Majorana basis and antisymmetrize.

    H_M is the antisymmetric part of -i * Omega H_BdG Omega^dag.  That matrix
    is anti-Hermitian, so its antisymmetric part is exactly real; the
    symmetric remainder only shifts the many-body energy by a constant and is
    dropped.  Residual imaginary round-off (< 1e-13) is discarded and exact
    antisymmetry is enforced.
    """
    bdg = build_bdg(couplings)
    omega = majorana_from_nambu_map(couplings.params.n)
    conjugated = -1j * (omega @ bdg.matrix @ omega.conj().T)
    hm = ((conjugated - conjugated.T) / 2.0).real
    hm = (hm - hm.T) / 2.0
    return MajoranaGenerator(couplings.params, _readonly(hm))


def particle_hole_swap(n: int) -> np.ndarray:
    """tau_x in Nambu space: swaps the particle and hole N-blocks."""
    tau = np.zeros((2 * n, 2 * n))
    tau[:n, n:] = np.eye(n)
    tau[n:, :n] = np.eye(n)
    return tau
