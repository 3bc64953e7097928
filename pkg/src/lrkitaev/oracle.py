"""Brute-force many-body ground truth at N <= 4.

Everything here works with explicit 2^N x 2^N matrices: fermion operators
from the standard string construction, Majorana matrices normalized to
gamma^2 = 1/2, the chain Hamiltonian assembled term by term from its
definition, and an operator-space Lanczos recursion with the
infinite-temperature Hilbert-Schmidt product.  None of it reuses the
single-particle machinery, so agreement between the two routes certifies the
coefficient-space algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lanczos import SeedSpec
from .model import MajoranaGenerator, ModelParams

__all__ = [
    "ManyBodyBasis",
    "build_manybody_majoranas",
    "build_manybody_hamiltonian",
    "check_commutator_closure",
    "manybody_lanczos",
    "linear_sector_residual",
    "oracle_report",
]

MAX_SITES = 4  # operator space is 4^N-dimensional; keep it desk-sized


def _fermion_operators(n: int) -> list[np.ndarray]:
    """Annihilation matrices c_1..c_N on the 2^N-dimensional Fock space."""
    ident = np.eye(2)
    parity = np.diag([1.0, -1.0])
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])
    ops = []
    for j in range(n):
        factors = [parity] * j + [lower] + [ident] * (n - j - 1)
        mat = factors[0]
        for f in factors[1:]:
            mat = np.kron(mat, f)
        ops.append(mat.astype(complex))
    return ops


@dataclass(frozen=True)
class ManyBodyBasis:
    """Dense Hermitian Majorana matrices gamma_1..gamma_2N with gamma^2 = 1/2."""

    n: int
    gammas: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return 2**self.n


def build_manybody_majoranas(n: int) -> ManyBodyBasis:
    """Site-interleaved Majorana matrices; rejects N > 4 (memory guard)."""
    if n > MAX_SITES:
        raise ValueError(f"many-body oracle is capped at N <= {MAX_SITES}, got {n}")
    if n < 1:
        raise ValueError("need at least one site")
    gammas: list[np.ndarray] = []
    for c in _fermion_operators(n):
        cdag = c.conj().T
        gammas.append((c + cdag) / np.sqrt(2.0))
        gammas.append((cdag - c) / (1j * np.sqrt(2.0)))
    return ManyBodyBasis(n=n, gammas=tuple(gammas))


def build_manybody_hamiltonian(params: ModelParams) -> np.ndarray:
    """Chain Hamiltonian assembled directly from fermion matrices.

    sin(theta) sum_{i<j} [c_i^dag c_j + (1+eps) c_i c_j + h.c.] / |i-j|^alpha
    + 2 cos(theta) sum_i n_i, open boundaries.  Independent of every
    single-particle construction in the package.
    """
    if params.n > MAX_SITES:
        raise ValueError(f"many-body oracle is capped at N <= {MAX_SITES}")
    cs = _fermion_operators(params.n)
    dim = 2**params.n
    h = np.zeros((dim, dim), dtype=complex)
    for i in range(params.n):
        h += 2.0 * np.cos(params.theta) * (cs[i].conj().T @ cs[i])
        for j in range(i + 1, params.n):
            coupling = np.sin(params.theta) / (j - i) ** params.alpha
            term = coupling * (
                cs[i].conj().T @ cs[j] + (1.0 + params.epsilon) * cs[i] @ cs[j]
            )
            h += term + term.conj().T
    return h


def hilbert_schmidt(a: np.ndarray, b: np.ndarray, n: int, prefactor: bool = True) -> complex:
    """<A, B> = Tr(A^dag B) / 2^N (prefactor optional; it cancels from b_n)."""
    value = np.trace(a.conj().T @ b)
    return value / 2**n if prefactor else value


def check_commutator_closure(basis: ManyBodyBasis, hm: MajoranaGenerator) -> float:
    """Max residual of [H, gamma_l] = i sum_m H_M[m, l] gamma_m over l.

    H is built from the generator under test, H = (i/2) sum H_M[m,n] g_m g_n,
    so the residual probes the closure identity itself.
    """
    if basis.n != hm.params.n:
        raise ValueError("basis and generator have different site counts")
    h = induced_hamiltonian(basis, hm)
    worst = 0.0
    for ell in range(2 * basis.n):
        rhs = np.zeros_like(h)
        for m in range(2 * basis.n):
            coeff = hm.matrix[m, ell]
            if coeff != 0.0:
                rhs += 1j * coeff * basis.gammas[m]
        lhs = h @ basis.gammas[ell] - basis.gammas[ell] @ h
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def induced_hamiltonian(basis: ManyBodyBasis, hm: MajoranaGenerator) -> np.ndarray:
    """(i/2) sum_{mu,nu} H_M[mu, nu] gamma_mu gamma_nu as a dense matrix."""
    dim = basis.dim
    h = np.zeros((dim, dim), dtype=complex)
    for mu in range(2 * basis.n):
        for nu in range(2 * basis.n):
            coeff = hm.matrix[mu, nu]
            if coeff != 0.0:
                h += 0.5j * coeff * (basis.gammas[mu] @ basis.gammas[nu])
    return h


def seed_matrix(basis: ManyBodyBasis, seed: SeedSpec) -> np.ndarray:
    """Matrix realization of a Majorana-linear seed (unnormalized)."""
    seed.validate_against(basis.n)
    op = np.zeros((basis.dim, basis.dim), dtype=complex)
    for mu, coeff in seed.terms:
        op += coeff * basis.gammas[mu - 1]
    return op


def manybody_lanczos(
    basis: ManyBodyBasis,
    hamiltonian: np.ndarray,
    seed: SeedSpec,
    depth: int,
    prefactor: bool = True,
    b_floor: float = 1e-9,
) -> tuple[np.ndarray, np.ndarray, list[np.ndarray]]:
    """Operator-space Lanczos over the full 4^N-dimensional space.

    The Liouvillian is the commutator with ``hamiltonian``; vectors are dense
    matrices orthogonalized with the Hilbert-Schmidt product (full
    reorthogonalization -- simplicity over speed in an oracle).  Returns
    (a, b, krylov_operators).
    """
    n = basis.n

    def ip(x, y):
        return hilbert_schmidt(x, y, n, prefactor=prefactor)

    op = seed_matrix(basis, seed)
    op = op / np.sqrt(ip(op, op).real)
    vectors = [op]
    a_list: list[float] = []
    b_list: list[float] = []
    b_prev = 0.0
    for m in range(1, depth + 1):
        w = hamiltonian @ vectors[-1] - vectors[-1] @ hamiltonian
        a_m = ip(vectors[-1], w).real
        a_list.append(a_m)
        w = w - a_m * vectors[-1]
        if m >= 2:
            w = w - b_prev * vectors[-2]
        for u in vectors:
            w = w - ip(u, w) * u
        b_m = np.sqrt(ip(w, w).real)
        if b_m <= b_floor:
            break
        vectors.append(w / b_m)
        b_list.append(b_m)
        b_prev = b_m
    return np.asarray(a_list), np.asarray(b_list), vectors


def linear_sector_residual(basis: ManyBodyBasis, operator: np.ndarray) -> float:
    """Distance of an operator from span{gamma_mu} in Hilbert-Schmidt norm.

    The commutator maps the linear Majorana sector to itself, so Krylov
    operators grown from a linear seed should never leave it.
    """
    n = basis.n
    projected = np.zeros_like(operator)
    for gamma in basis.gammas:
        # <gamma, gamma> = 1/2 under the prefactored product
        coeff = hilbert_schmidt(gamma, operator, n) / 0.5
        projected += coeff * gamma
    diff = operator - projected
    return float(np.sqrt(hilbert_schmidt(diff, diff, n).real))


def oracle_report(params: ModelParams, seed: SeedSpec) -> dict:
    """Residual table for one parameter point (drives the CLI subcommand).

    Compares the many-body route (explicit fermion matrices, HS-product
    Lanczos) against the single-particle constructions and recursion.
    """
    from .lanczos import LanczosConfig, lanczos_majorana, lanczos_nambu
    from .model import build_coupling_matrices, build_bdg, build_majorana_generator

    basis = build_manybody_majoranas(params.n)
    n = params.n
    dim = basis.dim

    anticomm = 0.0
    trace_resid = 0.0
    for mu in range(2 * n):
        trace_resid = max(trace_resid, abs(np.trace(basis.gammas[mu])))
        for nu in range(mu, 2 * n):
            target = np.eye(dim) if mu == nu else np.zeros((dim, dim))
            anticomm = max(
                anticomm,
                float(
                    np.abs(
                        basis.gammas[mu] @ basis.gammas[nu]
                        + basis.gammas[nu] @ basis.gammas[mu]
                        - target
                    ).max()
                ),
            )
            expected = 2 ** (n - 1) if mu == nu else 0.0
            trace_resid = max(
                trace_resid,
                abs(np.trace(basis.gammas[mu] @ basis.gammas[nu]) - expected),
            )

    couplings = build_coupling_matrices(params)
    hm = build_majorana_generator(couplings)
    bdg = build_bdg(couplings)
    closure = check_commutator_closure(basis, hm)

    h_explicit = build_manybody_hamiltonian(params)
    # induced Hamiltonian differs from the explicit one by Tr(K)/2 * identity
    shift = np.trace(couplings.hopping) / 2.0
    induced = induced_hamiltonian(basis, hm)
    constant_offset = float(
        np.abs(h_explicit - induced - shift * np.eye(dim)).max()
    )

    a_mb, b_mb, ops = manybody_lanczos(basis, h_explicit, seed, depth=2 * n + 4)
    cfg = LanczosConfig(b_floor=1e-9)
    run_m = lanczos_majorana(hm, seed, cfg)
    run_n = lanczos_nambu(bdg, seed, cfg)

    def deviation(b_sp: np.ndarray) -> float:
        m = min(len(b_mb), len(b_sp))
        if m == 0:
            return 0.0 if len(b_mb) == len(b_sp) else float("inf")
        dev = float(np.abs(b_mb[:m] - b_sp[:m]).max())
        return dev if len(b_mb) == len(b_sp) else float("inf")

    sector = max(linear_sector_residual(basis, op) for op in ops)

    return {
        "params": {
            "n": params.n,
            "alpha": params.alpha,
            "theta": params.theta,
            "epsilon": params.epsilon,
        },
        "seed": seed.label or str(seed.terms),
        "anticommutator_residual": anticomm,
        "trace_residual": trace_resid,
        "closure_residual": closure,
        "hamiltonian_constant_offset_residual": constant_offset,
        "manybody_a_max": float(np.abs(a_mb).max()) if a_mb.size else 0.0,
        "manybody_krylov_dimension": len(b_mb) + 1,
        "krylov_dimension_bound": 2 * n,
        "linear_sector_residual": sector,
        "b_deviation_majorana": deviation(run_m.b),
        "b_deviation_nambu": deviation(run_n.b),
    }
