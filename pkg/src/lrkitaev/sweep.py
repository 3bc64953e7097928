"""Joint phase-diagram sweep over an (alpha, theta) grid.

Each grid cell gets a ``PhasePoint``: the crossing count of the
cross-checked Lanczos run (Krylov side) and the edge/bulk gap classification
at every configured edge-weight threshold (BdG side).  Cells are independent
and are farmed out to worker processes; the aggregator is the only writer to
the append-style checkpoint log, which is flushed with an atomic rename so
interrupted sweeps resume without recomputation.
"""

from __future__ import annotations

import atexit
import json
import math
import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .diagnostics import DiagnosticsConfig, krylov_phase, staggering
from .lanczos import LanczosConfig, SeedSpec, dual_run
from .model import ModelParams, build_bdg, build_coupling_matrices, build_majorana_generator
from .spectrum import EdgeConfig, classify_gaps, diagonalize_bdg

__all__ = [
    "GridSpec",
    "PhasePoint",
    "AgreementReport",
    "run_sweep",
    "compute_phase_point",
    "agreement_report",
    "phase_csv_header",
    "phase_csv_rows",
    "threshold_label",
]

DEFAULT_THRESHOLDS = (0.05, 0.1, 0.5)
CHECKPOINT_NAME = "checkpoint.ndjson"


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid in (alpha, theta) plus the per-point configuration.

    alpha_i = alpha_max * i / alpha_points for i = 1..alpha_points, so the
    grid fills (0, alpha_max] including the upper endpoint; theta_j =
    pi * j / (theta_points + 1) stays strictly inside (0, pi).
    """

    n: int
    epsilon: float
    seed: str = "gamma1"
    alpha_points: int = 99
    theta_points: int = 99
    alpha_max: float = 3.0
    thresholds: tuple[float, ...] = DEFAULT_THRESHOLDS
    primary_threshold: float = 0.1
    eta_tol: float = 0.0

    def __post_init__(self):
        if self.alpha_points < 1 or self.theta_points < 1:
            raise ValueError("grid needs at least one point per axis")
        if self.alpha_max <= 0:
            raise ValueError("alpha_max must be positive")
        if not self.thresholds or not all(0 < t < 1 for t in self.thresholds):
            raise ValueError("thresholds must lie in (0, 1)")
        if self.primary_threshold not in self.thresholds:
            raise ValueError("primary_threshold must be one of thresholds")

    def alpha_at(self, i: int) -> float:
        return self.alpha_max * i / self.alpha_points

    def theta_at(self, j: int) -> float:
        return math.pi * j / (self.theta_points + 1)

    def cells(self) -> list[tuple[int, int]]:
        """Row-major cell order: alpha index outer, theta index inner."""
        return [
            (i, j)
            for i in range(1, self.alpha_points + 1)
            for j in range(1, self.theta_points + 1)
        ]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "epsilon": self.epsilon,
            "seed": self.seed,
            "alpha_points": self.alpha_points,
            "theta_points": self.theta_points,
            "alpha_max": self.alpha_max,
            "thresholds": list(self.thresholds),
            "primary_threshold": self.primary_threshold,
            "eta_tol": self.eta_tol,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GridSpec":
        data = dict(data)
        data["thresholds"] = tuple(data["thresholds"])
        return cls(**data)


@dataclass(frozen=True)
class PhasePoint:
    """Joint record of one grid cell."""

    i: int
    j: int
    alpha: float
    theta: float
    n_cross: int
    krylov_phase: str
    gap_phase: dict
    delta_edge: dict
    delta_bulk: dict
    n_stable: int
    termination: str
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "alpha": self.alpha,
            "theta": self.theta,
            "n_cross": self.n_cross,
            "krylov_phase": self.krylov_phase,
            "gap_phase": self.gap_phase,
            "delta_edge": self.delta_edge,
            "delta_bulk": self.delta_bulk,
            "n_stable": self.n_stable,
            "termination": self.termination,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PhasePoint":
        return cls(**data)


def threshold_label(threshold: float) -> str:
    """Column suffix for one edge-weight threshold, e.g. 0.1 -> 'w010'."""
    return f"w{round(threshold * 100):03d}"


def compute_phase_point(spec: GridSpec, cell: tuple[int, int]) -> PhasePoint:
    """Evaluate one grid cell; failures are recorded, never raised."""
    i, j = cell
    alpha = spec.alpha_at(i)
    theta = spec.theta_at(j)
    try:
        params = ModelParams(n=spec.n, alpha=alpha, theta=theta, epsilon=spec.epsilon)
        seed = SeedSpec.from_string(spec.seed, params.n)
        couplings = build_coupling_matrices(params)
        hm = build_majorana_generator(couplings)
        bdg = build_bdg(couplings)

        run_m, run_n, depth = dual_run(hm, bdg, seed, LanczosConfig())
        termination = run_m.stability.termination_reason
        if depth < min(run_m.n_stable, run_n.n_stable):
            termination = "CrossCheckFail"
        series = staggering(
            run_m, DiagnosticsConfig(eta_tol=spec.eta_tol), n_stable=depth
        )
        n_cross = series.n_cross

        modes = diagonalize_bdg(bdg)
        gap_phase: dict = {}
        delta_edge: dict = {}
        delta_bulk: dict = {}
        for threshold in spec.thresholds:
            cfg = EdgeConfig.for_params(params, threshold=threshold)
            gaps = classify_gaps(modes, cfg)
            label = threshold_label(threshold)
            gap_phase[label] = gaps.phase
            delta_edge[label] = gaps.delta_edge
            delta_bulk[label] = gaps.delta_bulk

        return PhasePoint(
            i=i,
            j=j,
            alpha=alpha,
            theta=theta,
            n_cross=n_cross,
            krylov_phase=krylov_phase(n_cross),
            gap_phase=gap_phase,
            delta_edge=delta_edge,
            delta_bulk=delta_bulk,
            n_stable=depth,
            termination=termination,
        )
    except Exception as exc:  # per-point failures must not abort the sweep
        return PhasePoint(
            i=i,
            j=j,
            alpha=alpha,
            theta=theta,
            n_cross=0,
            krylov_phase="error",
            gap_phase={},
            delta_edge={},
            delta_bulk={},
            n_stable=0,
            termination="Error",
            error=f"{type(exc).__name__}: {exc}",
        )


_POOLS: dict[int, ProcessPoolExecutor] = {}


def _get_pool(workers: int) -> ProcessPoolExecutor:
    # spawned (not forked) workers: BLAS thread pools do not survive fork
    pool = _POOLS.get(workers)
    if pool is None:
        pool = ProcessPoolExecutor(
            max_workers=workers, mp_context=multiprocessing.get_context("spawn")
        )
        _POOLS[workers] = pool
    return pool


@atexit.register
def _shutdown_pools() -> None:
    for pool in _POOLS.values():
        pool.shutdown(cancel_futures=True)
    _POOLS.clear()


def compute_cells(spec: GridSpec, cells, workers: int = 1) -> list[PhasePoint]:
    """Evaluate a batch of cells, optionally across worker processes.

    Per-cell results are pure functions of (spec, cell), so the outcome is
    independent of the worker count and of scheduling order.
    """
    cells = list(cells)
    if workers <= 1 or len(cells) <= 1:
        return [compute_phase_point(spec, cell) for cell in cells]
    pool = _get_pool(workers)
    chunk = max(1, len(cells) // (4 * workers))
    return list(pool.map(_point_task, [(spec, c) for c in cells], chunksize=chunk))


def _point_task(args: tuple[GridSpec, tuple[int, int]]) -> PhasePoint:
    return compute_phase_point(*args)


# --- checkpointing -----------------------------------------------------------

def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def load_checkpoint(path: str) -> dict[tuple[int, int], PhasePoint]:
    """Read the record log; silently skips a trailing partial line."""
    done: dict[tuple[int, int], PhasePoint] = {}
    if not os.path.exists(path):
        return done
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                continue
            point = PhasePoint.from_dict(record)
            done[(point.i, point.j)] = point
    return done


def flush_checkpoint(path: str, done: dict[tuple[int, int], PhasePoint]) -> None:
    lines = [
        json.dumps(done[key].to_dict()) for key in sorted(done.keys())
    ]
    _atomic_write(path, "\n".join(lines) + ("\n" if lines else ""))


def run_sweep(
    spec: GridSpec,
    out_dir: str | None = None,
    workers: int = 1,
    resume: bool = False,
    flush_every: int = 32,
    progress=None,
    compute=None,
) -> list[PhasePoint]:
    """Evaluate the whole grid, checkpointing as batches complete.

    Results are returned in row-major grid order regardless of worker count
    or completion order, so repeated sweeps of the same spec are
    bit-identical.  With ``resume`` the checkpoint in ``out_dir`` is loaded
    first and only missing cells are computed.  ``compute`` may replace the
    in-process batch evaluator (the CLI injects a service-backed one).
    """
    if compute is None:
        compute = compute_cells
    done: dict[tuple[int, int], PhasePoint] = {}
    checkpoint_path = None
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        checkpoint_path = os.path.join(out_dir, CHECKPOINT_NAME)
        if resume:
            done = load_checkpoint(checkpoint_path)

    cells = spec.cells()
    pending = [c for c in cells if c not in done]

    for start in range(0, len(pending), flush_every):
        batch = pending[start : start + flush_every]
        for point in compute(spec, batch, workers):
            done[(point.i, point.j)] = point
        if checkpoint_path is not None:
            flush_checkpoint(checkpoint_path, done)
        if progress is not None:
            progress(min(start + flush_every, len(pending)), len(pending))

    return [done[c] for c in cells]


# --- CSV and agreement -------------------------------------------------------

def phase_csv_header(spec: GridSpec) -> list[str]:
    labels = [threshold_label(t) for t in spec.thresholds]
    primary = threshold_label(spec.primary_threshold)
    return (
        ["alpha", "theta", "n_cross", "krylov_phase"]
        + [f"gap_phase_{lab}" for lab in labels]
        + [f"delta_edge_{primary}", f"delta_bulk_{primary}"]
        + ["n_stable", "termination"]
    )


def _fmt(x: float) -> str:
    if x == math.inf:
        return "inf"
    return repr(float(x))


def phase_csv_rows(spec: GridSpec, points: list[PhasePoint]) -> list[list[str]]:
    labels = [threshold_label(t) for t in spec.thresholds]
    primary = threshold_label(spec.primary_threshold)
    rows = []
    for p in points:
        rows.append(
            [_fmt(p.alpha), _fmt(p.theta), str(p.n_cross), p.krylov_phase]
            + [p.gap_phase.get(lab, "error") for lab in labels]
            + [
                _fmt(p.delta_edge[primary]) if primary in p.delta_edge else "nan",
                _fmt(p.delta_bulk[primary]) if primary in p.delta_bulk else "nan",
            ]
            + [str(p.n_stable), p.termination]
        )
    return rows


@dataclass(frozen=True)
class AgreementReport:
    """How often the Krylov and gap classifications coincide at one threshold."""

    threshold: float
    total: int
    agree: int
    disagreements: list[PhasePoint] = field(default_factory=list)

    @property
    def fraction(self) -> float:
        return self.agree / self.total if self.total else 1.0


def agreement_report(points: list[PhasePoint], threshold: float) -> AgreementReport:
    label = threshold_label(threshold)
    agree = 0
    disagreements = []
    valid = 0
    for p in points:
        if p.error is not None or label not in p.gap_phase:
            continue
        valid += 1
        if p.krylov_phase == p.gap_phase[label]:
            agree += 1
        else:
            disagreements.append(p)
    return AgreementReport(
        threshold=threshold, total=valid, agree=agree, disagreements=disagreements
    )
