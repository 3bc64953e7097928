"""BdG diagonalization, edge weights, and edge/bulk gap classification.

For each parameter point the BdG matrix is fully diagonalized, the positive
branch of the particle-hole symmetric spectrum is retained, and every mode is
assigned an edge weight: the probability it carries in windows of
``window_size`` sites at the two chain ends.  Modes whose weight exceeds a
threshold are classified as edge localized; the minimum energy in each class
yields the edge and bulk gaps and the phase label of the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import BdGMatrix, ModelParams, build_bdg, build_coupling_matrices

__all__ = [
    "EdgeConfig",
    "ModeSet",
    "GapClassification",
    "DiagonalizationError",
    "diagonalize_bdg",
    "edge_weight",
    "edge_weights",
    "classify_gaps",
    "spectrum_scan",
    "EDGE_GAP",
    "BULK_GAP",
]

EDGE_GAP = "edge"
BULK_GAP = "bulk"


class DiagonalizationError(RuntimeError):
    """Dense eigensolver failed to converge for a parameter point."""


@dataclass(frozen=True)
class EdgeConfig:
    """Boundary window size and edge-weight threshold.

    ``window_size`` defaults to floor(sqrt(N)) when built via
    :meth:`for_params`; it must not exceed half the chain so the two windows
    stay disjoint.
    """

    window_size: int
    threshold: float = 0.1

    def __post_init__(self):
        if self.window_size < 1:
            raise ValueError("window_size must be a positive integer")
        if not 0 < self.threshold < 1:
            raise ValueError("threshold must lie in (0, 1)")

    @classmethod
    def for_params(cls, params: ModelParams, threshold: float = 0.1) -> "EdgeConfig":
        return cls(window_size=math.floor(math.sqrt(params.n)), threshold=threshold)

    def validate_against(self, n: int) -> None:
        if self.window_size > n // 2:
            raise ValueError(
                f"window_size {self.window_size} exceeds N/2 = {n // 2}"
            )


@dataclass(frozen=True)
class ModeSet:
    """Positive-branch BdG eigenpairs of one parameter point.

    Attributes
    ----------
    params : ModelParams
    energies : np.ndarray
        Sorted nonnegative energies E_1 <= ... <= E_N.  Zero modes are
        counted once (the largest N of the sorted 2N eigenvalues).
    vectors : np.ndarray
        2N x N array; column nu is the normalized eigenvector (u_nu, v_nu).
    norm_scale : float
        sqrt(trace(H^2)), the normalization used when plotting spectra.
    """

    params: ModelParams
    energies: np.ndarray
    vectors: np.ndarray
    norm_scale: float

    @property
    def n(self) -> int:
        return self.params.n


@dataclass(frozen=True)
class GapClassification:
    """Edge and bulk gaps of one mode set at one threshold.

    An empty class has gap +inf.  The phase is ``edge`` iff
    delta_edge < delta_bulk (strict); ties go to ``bulk``.
    """

    delta_edge: float
    delta_bulk: float

    @property
    def phase(self) -> str:
        return EDGE_GAP if self.delta_edge < self.delta_bulk else BULK_GAP


def diagonalize_bdg(bdg: BdGMatrix) -> ModeSet:
    """Dense eigendecomposition of the BdG matrix, positive branch retained.

    Exactly N modes are kept: the largest N of the 2N sorted eigenvalues,
    which under particle-hole symmetry is the nonnegative branch with zero
    modes assigned once.
    """
    n = bdg.n
    try:
        energies, vectors = np.linalg.eigh(bdg.matrix)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - library failure
        raise DiagonalizationError(
            f"eigh failed to converge for {bdg.params}"
        ) from exc
    norm_scale = float(np.sqrt(np.sum(bdg.matrix * bdg.matrix)))
    return ModeSet(
        params=bdg.params,
        energies=energies[n:].copy(),
        vectors=vectors[:, n:].copy(),
        norm_scale=norm_scale,
    )


def edge_weight(vector: np.ndarray, cfg: EdgeConfig) -> float:
    """Probability carried by the first and last ``window_size`` sites.

    ``vector`` is a normalized 2N-component BdG eigenvector (u, v); the weight
    sums |u_j|^2 + |v_j|^2 over both boundary windows and lies in [0, 1].
    """
    n = vector.shape[0] // 2
    cfg.validate_against(n)
    ell = cfg.window_size
    sites = np.concatenate([np.arange(ell), np.arange(n - ell, n)])
    u, v = vector[:n], vector[n:]
    return float(np.sum(np.abs(u[sites]) ** 2 + np.abs(v[sites]) ** 2))


def edge_weights(modes: ModeSet, cfg: EdgeConfig) -> np.ndarray:
    """Edge weight of every retained mode (vectorized over the mode index)."""
    n = modes.n
    cfg.validate_against(n)
    ell = cfg.window_size
    sites = np.concatenate([np.arange(ell), np.arange(n - ell, n)])
    u = modes.vectors[sites, :]
    v = modes.vectors[n + sites, :]
    return np.sum(np.abs(u) ** 2 + np.abs(v) ** 2, axis=0)


def classify_gaps(modes: ModeSet, cfg: EdgeConfig) -> GapClassification:
    """Split modes by edge weight and take the minimum energy of each class."""
    weights = edge_weights(modes, cfg)
    is_edge = weights > cfg.threshold
    delta_edge = float(modes.energies[is_edge].min()) if is_edge.any() else math.inf
    delta_bulk = float(modes.energies[~is_edge].min()) if (~is_edge).any() else math.inf
    return GapClassification(delta_edge=delta_edge, delta_bulk=delta_bulk)


def spectrum_scan(
    n: int,
    alpha: float,
    epsilon: float,
    thetas: np.ndarray,
    edge_cfg: EdgeConfig | None = None,
) -> list[dict]:
    """Positive-branch spectrum versus theta for a fixed (N, alpha, epsilon).

    Returns one row dict per (theta, mode) pair with keys
    ``theta_over_pi, mode_index, energy, energy_normalized, edge_weight``,
    ordered by theta then by mode index (ascending energy).
    """
    rows: list[dict] = []
    for theta in np.asarray(thetas, dtype=float):
        params = ModelParams(n=n, alpha=alpha, theta=float(theta), epsilon=epsilon)
        cfg = edge_cfg if edge_cfg is not None else EdgeConfig.for_params(params)
        modes = diagonalize_bdg(build_bdg(build_coupling_matrices(params)))
        weights = edge_weights(modes, cfg)
        for k in range(n):
            rows.append(
                {
                    "theta_over_pi": params.theta_over_pi,
                    "mode_index": k + 1,
                    "energy": float(modes.energies[k]),
                    "energy_normalized": float(modes.energies[k] / modes.norm_scale),
                    "edge_weight": float(weights[k]),
                }
            )
    return rows
