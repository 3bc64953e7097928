"""Single-particle operator Lanczos recursion with stability gating.

The Heisenberg dynamics of operators linear in Majorana modes closes on a
2N-dimensional coefficient space, so the operator Lanczos recursion reduces
to an ordinary Lanczos iteration with a Hermitian generator:

* Majorana representation: generator i*H_M acting on complex coefficient
  vectors (a real seed alternates between real and purely imaginary Krylov
  vectors),
* Nambu representation: generator H_BdG; for the boundary seed the whole
  recursion runs in real arithmetic.

The two representations are formally equivalent but numerically distinct,
which makes their agreement a stringent stability check.  Every run applies
one pass of partial reorthogonalization per step and stops at the first gate
violation: off-diagonal coefficient at or below the floor, loss of basis
orthogonality, or the step budget.  Coefficients past the truncation point
are never reported.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .model import BdGMatrix, MajoranaGenerator, majorana_from_nambu_map

__all__ = [
    "SeedSpec",
    "LanczosConfig",
    "StabilityReport",
    "LanczosRun",
    "TridiagonalT",
    "KrylovState",
    "lanczos_majorana",
    "lanczos_nambu",
    "cross_check",
    "build_tridiagonal",
    "evolve_krylov",
    "MAJORANA",
    "NAMBU",
]

MAJORANA = "majorana"
NAMBU = "nambu"

# termination reasons
B_FLOOR = "BFloor"
ORTHO_LOSS = "OrthoLoss"
CROSS_CHECK_FAIL = "CrossCheckFail"
MAX_STEPS = "MaxSteps"
EXACT_BREAKDOWN = "ExactBreakdown"

_SEED_TERM = re.compile(r"gamma(\d+|N\+1|N)")


@dataclass(frozen=True)
class SeedSpec:
    """Seed operator: a unit-norm real combination of Majorana modes.

    ``terms`` holds (index, coefficient) pairs with 1-based Majorana indices
    in [1, 2N]; the coefficient vector is normalized before the recursion
    (the overall scale cancels from every Lanczos coefficient anyway).
    """

    terms: tuple[tuple[int, float], ...]
    label: str = ""

    @classmethod
    def from_string(cls, text: str, n: int) -> "SeedSpec":
        """Parse seed strings like ``gamma1``, ``gamma1+gamma2``, ``gammaN+gammaN+1``.

        ``N`` resolves to Majorana index N of the 2N available modes (a
        mid-chain mode) and ``N+1`` to its right neighbor.
        """
        tokens = _SEED_TERM.findall(text)
        if not tokens or "+".join(f"gamma{t}" for t in tokens) != text:
            raise ValueError(
                f"unrecognized seed {text!r}; expected terms like "
                "'gamma1', 'gamma1+gamma2', 'gammaN', 'gammaN+gammaN+1'"
            )
        terms = []
        for tok in tokens:
            if tok == "N":
                mu = n
            elif tok == "N+1":
                mu = n + 1
            else:
                mu = int(tok)
            terms.append((mu, 1.0))
        spec = cls(terms=tuple(terms), label=text)
        spec.validate_against(n)
        return spec

    def validate_against(self, n: int) -> None:
        for mu, _ in self.terms:
            if not 1 <= mu <= 2 * n:
                raise ValueError(f"Majorana index {mu} outside [1, {2 * n}]")

    def majorana_vector(self, n: int) -> np.ndarray:
        """Normalized real coefficient vector of length 2N (Majorana basis)."""
        self.validate_against(n)
        v = np.zeros(2 * n)
        for mu, coeff in self.terms:
            v[mu - 1] += coeff
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise ValueError("seed coefficients sum to the zero vector")
        return v / norm

    def nambu_vector(self, n: int) -> np.ndarray:
        """Seed coefficients in the Nambu basis: w = Omega^T v.

        A global phase is stripped when possible, so single-type seeds
        (gamma1, gammaN, ...) come out real; mixed-type seeds stay complex.
        """
        omega = majorana_from_nambu_map(n)
        w = omega.T @ self.majorana_vector(n).astype(complex)
        pivot = w[np.argmax(np.abs(w))]
        rotated = w * (abs(pivot) / pivot)
        if np.abs(rotated.imag).max() <= 1e-14:
            return rotated.real.copy()
        return w


@dataclass(frozen=True)
class LanczosConfig:
    """Numerical protocol of the recursion.

    reorth_threshold : overlap size above which a prior basis vector is
        projected out of the new direction (one pass per step).
    b_floor : the recursion stops once an off-diagonal coefficient falls to
        or below this floor; the offending coefficient is discarded.
    breakdown_ratio : a floor hit is labelled ExactBreakdown (invariant
        subspace exhausted) when the coefficient collapsed by at least this
        factor relative to the previous one, BFloor otherwise.
    orthogonality_tol : maximum tolerated overlap of a new basis vector with
        the existing basis; beyond it the run stops with OrthoLoss.
    cross_check_tol : maximum tolerated pointwise deviation between the
        Majorana and Nambu coefficient sequences.
    max_steps : step budget; defaults to 2N (the Krylov dimension bound).
    metric_scale : positive constant multiplying the inner product; the
        coefficients are invariant under it (exposed for tests).
    """

    reorth_threshold: float = 1e-10
    b_floor: float = 1e-7
    breakdown_ratio: float = 1e-3
    orthogonality_tol: float = 1e-7
    cross_check_tol: float = 1e-7
    max_steps: int | None = None
    metric_scale: float = 1.0

    def __post_init__(self):
        for name in ("reorth_threshold", "b_floor", "breakdown_ratio",
                     "orthogonality_tol", "cross_check_tol", "metric_scale"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    def steps_for(self, n: int) -> int:
        return 2 * n if self.max_steps is None else self.max_steps


@dataclass(frozen=True)
class StabilityReport:
    """Why and where a run was truncated.

    ``eps_max[m-1]`` is the maximum overlap of basis vector v_m with all
    earlier ones, recorded per accepted step.  ``truncation_index`` equals
    the number of retained off-diagonal coefficients; everything past it is
    excluded from downstream diagnostics.  ``terminal_b`` is the rejected
    coefficient when the floor gate fired.
    """

    termination_reason: str
    truncation_index: int
    eps_max: np.ndarray
    terminal_b: float | None = None


@dataclass(frozen=True)
class LanczosRun:
    """Retained Lanczos data of one stability-gated recursion.

    ``b[k]`` is the 1-indexed coefficient b_{k+1} (with the convention
    b_0 = 0, which is never stored); all retained entries exceed the floor.
    ``a`` is kept as a diagnostic only -- for Hermitian seeds it vanishes
    identically.  ``basis`` (optional) holds the Krylov vectors as rows.
    """

    representation: str
    seed: SeedSpec
    a: np.ndarray
    b: np.ndarray
    n_stable: int
    stability: StabilityReport
    basis: np.ndarray | None = None

    def b_coefficient(self, k: int) -> float:
        """b_k with 1-based indexing; b_0 is 0 by convention."""
        if k == 0:
            return 0.0
        return float(self.b[k - 1])


@dataclass(frozen=True)
class TridiagonalT:
    """Krylov projection of the generator: symmetric tridiagonal, zero diagonal."""

    offdiag: np.ndarray

    @property
    def dimension(self) -> int:
        return self.offdiag.shape[0] + 1

    def matrix(self) -> np.ndarray:
        t = np.zeros((self.dimension, self.dimension))
        k = np.arange(self.offdiag.shape[0])
        t[k, k + 1] = self.offdiag
        t[k + 1, k] = self.offdiag
        return t


@dataclass(frozen=True)
class KrylovState:
    """Krylov-space amplitudes phi_n(t); unit norm at all times."""

    time: float
    amplitudes: np.ndarray


def _run_recursion(
    generator: np.ndarray,
    v0: np.ndarray,
    cfg: LanczosConfig,
    representation: str,
    seed: SeedSpec,
    keep_basis: bool,
) -> LanczosRun:
    """Three-term recursion with partial reorthogonalization and gates.

    Gate order per step: floor first (prevents dividing by a collapsing
    norm), then orthogonality of the freshly normalized vector.  The scaled
    inner product <x, y> = metric_scale * x^dag y is used throughout; the
    retained coefficients are invariant under metric_scale.
    """
    scale = cfg.metric_scale
    sqrt_scale = np.sqrt(scale)
    is_complex = np.iscomplexobj(generator) or np.iscomplexobj(v0)
    dtype = np.complex128 if is_complex else np.float64
    dim = generator.shape[0]
    max_steps = min(cfg.steps_for(dim // 2), dim)

    basis = np.zeros((max_steps + 1, dim), dtype=dtype)
    v = v0.astype(dtype)
    v = v / (sqrt_scale * np.linalg.norm(v))
    basis[0] = v

    def overlaps(block: np.ndarray, w: np.ndarray) -> np.ndarray:
        # <v_j, w> for all rows v_j; avoids conjugating the (large) block
        if is_complex:
            return scale * (block @ w.conj()).conj()
        return scale * (block @ w)

    a_list: list[float] = []
    b_list: list[float] = []
    eps_list: list[float] = []
    reason = MAX_STEPS
    terminal_b: float | None = None
    b_prev = 0.0

    for m in range(1, max_steps + 1):
        w = generator @ basis[m - 1]
        a_m = float((scale * np.vdot(basis[m - 1], w)).real)
        a_list.append(a_m)
        w = w - a_m * basis[m - 1]
        if m >= 2:
            w = w - b_prev * basis[m - 2]

        # one pass of partial reorthogonalization against the full prior basis
        ov = overlaps(basis[:m], w)
        mask = np.abs(ov) > cfg.reorth_threshold
        if mask.any():
            w = w - (ov * mask) @ basis[:m]

        b_m = float(sqrt_scale * np.linalg.norm(w))
        if b_m <= cfg.b_floor:
            collapsed = not b_list or b_m <= cfg.breakdown_ratio * b_list[-1]
            reason = EXACT_BREAKDOWN if collapsed else B_FLOOR
            terminal_b = b_m
            break

        v_m = w / (sqrt_scale * np.linalg.norm(w))
        eps_m = float(np.abs(overlaps(basis[:m], v_m)).max())
        if eps_m > cfg.orthogonality_tol:
            reason = ORTHO_LOSS
            terminal_b = b_m
            break

        b_list.append(b_m)
        eps_list.append(eps_m)
        basis[m] = v_m
        b_prev = b_m

    n_stable = len(b_list)
    report = StabilityReport(
        termination_reason=reason,
        truncation_index=n_stable,
        eps_max=np.asarray(eps_list),
        terminal_b=terminal_b,
    )
    return LanczosRun(
        representation=representation,
        seed=seed,
        a=np.asarray(a_list),
        b=np.asarray(b_list),
        n_stable=n_stable,
        stability=report,
        basis=basis[: n_stable + 1].copy() if keep_basis else None,
    )


def lanczos_majorana(
    hm: MajoranaGenerator,
    seed: SeedSpec,
    cfg: LanczosConfig = LanczosConfig(),
    keep_basis: bool = False,
) -> LanczosRun:
    """Lanczos recursion with the Hermitian generator i*H_M (complex arithmetic)."""
    v0 = seed.majorana_vector(hm.params.n)
    return _run_recursion(hm.liouvillian, v0, cfg, MAJORANA, seed, keep_basis)


def lanczos_nambu(
    bdg: BdGMatrix,
    seed: SeedSpec,
    cfg: LanczosConfig = LanczosConfig(),
    keep_basis: bool = False,
) -> LanczosRun:
    """Lanczos recursion with the real symmetric BdG generator.

    The seed is mapped through gamma = Omega Psi; for the boundary seed
    gamma_1 this is the real unit vector with entries 1/sqrt(2) at positions
    1 and N+1 and the whole recursion uses real arithmetic.  Seeds mixing
    both Majorana types of a site fall back to complex arithmetic.
    """
    w0 = seed.nambu_vector(bdg.params.n)
    return _run_recursion(bdg.matrix, w0, cfg, NAMBU, seed, keep_basis)


def cross_check(run_a: LanczosRun, run_b: LanczosRun, tol: float) -> int:
    """Largest index n such that |b_k^A - b_k^B| <= tol for all k <= n.

    Downstream analyses use min(n, each run's n_stable): coefficients are
    trusted only where the two formally equivalent recursions agree.
    """
    m = min(run_a.b.shape[0], run_b.b.shape[0])
    if m == 0:
        return 0
    within = np.abs(run_a.b[:m] - run_b.b[:m]) <= tol
    if within.all():
        return m
    return int(np.argmin(within))


def mutually_stable_depth(run_a: LanczosRun, run_b: LanczosRun, tol: float) -> int:
    """Cross-checked depth clipped to both runs' own stable depths."""
    return min(cross_check(run_a, run_b, tol), run_a.n_stable, run_b.n_stable)


def build_tridiagonal(run: LanczosRun) -> TridiagonalT:
    """Tridiagonal Krylov matrix with zero diagonal and the retained b's."""
    if run.n_stable < 1:
        raise ValueError("run has no retained coefficients")
    return TridiagonalT(offdiag=run.b[: run.n_stable].copy())


def evolve_krylov(tri: TridiagonalT, t: float) -> KrylovState:
    """phi(t) = exp(i T t) e_0 via eigendecomposition of T.

    Unitary in the finite Krylov space, so the amplitudes keep unit norm for
    every evolved time.
    """
    dim = tri.dimension
    if dim == 1:
        return KrylovState(time=t, amplitudes=np.ones(1, dtype=complex))
    evals, evecs = eigh_tridiagonal(np.zeros(dim), np.asarray(tri.offdiag))
    amplitudes = evecs @ (np.exp(1j * evals * t) * evecs[0, :])
    return KrylovState(time=t, amplitudes=amplitudes)


def dual_run(
    hm: MajoranaGenerator,
    bdg: BdGMatrix,
    seed: SeedSpec,
    cfg: LanczosConfig = LanczosConfig(),
) -> tuple[LanczosRun, LanczosRun, int]:
    """Run both representations and return (majorana, nambu, mutual depth)."""
    run_m = lanczos_majorana(hm, seed, cfg)
    run_n = lanczos_nambu(bdg, seed, cfg)
    return run_m, run_n, mutually_stable_depth(run_m, run_n, cfg.cross_check_tol)
