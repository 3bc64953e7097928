"""Krylov staggering series, sign filtering, and crossing count.

The staggering value at pair index n is ln(b_{2n-1}/b_{2n}): the logarithmic
ratio of consecutive odd and even off-diagonal coefficients.  Its
tolerance-filtered sign sequence yields the crossing count; zero crossings
signal a bulk-controlled gap, one or more an edge-controlled gap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lanczos import LanczosRun

__all__ = [
    "DiagnosticsConfig",
    "StaggeringSeries",
    "staggering",
    "crossing_count",
    "krylov_phase",
]


@dataclass(frozen=True)
class DiagnosticsConfig:
    """Analysis window and sign tolerance.

    The window starts at pair index ``n_min`` (>= 2: the first recursion
    steps carry initialization effects) and ends at ``n_max``; when ``n_max``
    is None it defaults to the largest pair fully inside the stable depth.
    ``eta_tol`` zeroes out staggering values of magnitude <= eta_tol before
    signs are taken; at large N the series is well resolved and 0 suffices.
    """

    eta_tol: float = 0.0
    n_min: int = 2
    n_max: int | None = None

    def __post_init__(self):
        if self.eta_tol < 0:
            raise ValueError("eta_tol must be nonnegative")
        if self.n_min < 2:
            raise ValueError("n_min must be >= 2")


@dataclass(frozen=True)
class StaggeringSeries:
    """Staggering values, filtered signs, and crossing count of one run."""

    pair_indices: np.ndarray  # n for each entry, n_min <= n <= n_max
    values: np.ndarray        # ln(b_{2n-1}/b_{2n})
    signs: np.ndarray         # -1, 0, +1 after the tolerance filter
    n_cross: int


def crossing_count(signs) -> int:
    """Adjacent opposite-sign pairs in the zero-filtered subsequence."""
    nonzero = [s for s in signs if s != 0]
    return sum(
        1 for a, b in zip(nonzero, nonzero[1:]) if a * b < 0
    )


def staggering(
    run: LanczosRun,
    cfg: DiagnosticsConfig = DiagnosticsConfig(),
    n_stable: int | None = None,
) -> StaggeringSeries:
    """Staggering series of a stability-gated run.

    Only coefficients inside the stable window enter; ``n_stable`` may clip
    the run's own depth further (e.g. to a cross-checked depth).  Raises if
    the window is empty.
    """
    depth = run.n_stable if n_stable is None else min(n_stable, run.n_stable)
    n_max = depth // 2 if cfg.n_max is None else min(cfg.n_max, depth // 2)
    if n_max < cfg.n_min:
        raise ValueError(
            f"stable depth {depth} leaves no staggering window "
            f"(n_min={cfg.n_min}, n_max={n_max})"
        )
    ns = np.arange(cfg.n_min, n_max + 1)
    b_odd = run.b[2 * ns - 2]   # b_{2n-1}, 1-indexed coefficients
    b_even = run.b[2 * ns - 1]  # b_{2n}
    values = np.log(b_odd / b_even)
    signs = np.where(np.abs(values) <= cfg.eta_tol, 0, np.sign(values)).astype(int)
    return StaggeringSeries(
        pair_indices=ns,
        values=values,
        signs=signs,
        n_cross=crossing_count(signs),
    )


def krylov_phase(n_cross: int) -> str:
    """Binary phase map: edge when the filtered signs flip at least once."""
    return "edge" if n_cross >= 1 else "bulk"
