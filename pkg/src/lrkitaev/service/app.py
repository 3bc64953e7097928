"""FastAPI service exposing the pipeline stages.

Endpoints are stateless compute wrappers around the core package: they take a
fully resolved configuration and return data.  File layout, checkpoints, and
manifests belong to the callers (the CLI drives sweeps batch by batch and
owns the output directory).
"""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..diagnostics import DiagnosticsConfig, krylov_phase, staggering
from ..lanczos import LanczosConfig, LanczosRun, SeedSpec, dual_run
from ..model import ModelParams, build_bdg, build_coupling_matrices, build_majorana_generator
from ..oracle import oracle_report
from ..spectrum import EdgeConfig, spectrum_scan
from ..sweep import GridSpec, PhasePoint, compute_cells
from . import schemas

__all__ = ["create_app", "app"]


def _chain_params(model: schemas.ChainParams) -> ModelParams:
    return ModelParams(
        n=model.n, alpha=model.alpha, theta=model.theta, epsilon=model.epsilon
    )


def _lanczos_config(settings: schemas.LanczosSettings) -> LanczosConfig:
    return LanczosConfig(
        reorth_threshold=settings.reorth_threshold,
        b_floor=settings.b_floor,
        orthogonality_tol=settings.orthogonality_tol,
        cross_check_tol=settings.cross_check_tol,
        max_steps=settings.max_steps,
    )


def _run_record(run: LanczosRun, params: schemas.ChainParams) -> schemas.RunRecord:
    return schemas.RunRecord(
        params=params,
        seed=run.seed.label,
        representation=run.representation,
        b=[float(x) for x in run.b],
        a_max=float(abs(run.a).max()) if run.a.size else 0.0,
        n_stable=run.n_stable,
        termination_reason=run.stability.termination_reason,
        eps_max=[float(x) for x in run.stability.eps_max],
    )


def _wire_float(x: float) -> float | None:
    return None if not math.isfinite(x) else x


def _point_model(point: PhasePoint) -> schemas.PhasePointModel:
    return schemas.PhasePointModel(
        i=point.i,
        j=point.j,
        alpha=point.alpha,
        theta=point.theta,
        n_cross=point.n_cross,
        krylov_phase=point.krylov_phase,
        gap_phase=dict(point.gap_phase),
        delta_edge={k: _wire_float(v) for k, v in point.delta_edge.items()},
        delta_bulk={k: _wire_float(v) for k, v in point.delta_bulk.items()},
        n_stable=point.n_stable,
        termination=point.termination,
        error=point.error,
    )


def point_from_model(model: schemas.PhasePointModel) -> PhasePoint:
    """Inverse of the wire encoding (None stands for +inf gaps)."""
    restore = lambda d: {k: (math.inf if v is None else v) for k, v in d.items()}
    return PhasePoint(
        i=model.i,
        j=model.j,
        alpha=model.alpha,
        theta=model.theta,
        n_cross=model.n_cross,
        krylov_phase=model.krylov_phase,
        gap_phase=dict(model.gap_phase),
        delta_edge=restore(model.delta_edge),
        delta_bulk=restore(model.delta_bulk),
        n_stable=model.n_stable,
        termination=model.termination,
        error=model.error,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="lrkitaev", version=__version__)

    @app.get("/api/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/api/spectrum", response_model=schemas.SpectrumResponse)
    def spectrum(request: schemas.SpectrumRequest) -> schemas.SpectrumResponse:
        thetas = np.array(
            [
                math.pi * j / (request.theta_points + 1)
                for j in range(1, request.theta_points + 1)
            ]
        )
        cfg = None
        if request.window_size is not None:
            if request.window_size > request.n // 2:
                raise HTTPException(
                    status_code=422,
                    detail=f"window_size must not exceed N/2 = {request.n // 2}",
                )
            cfg = EdgeConfig(window_size=request.window_size)
        rows = spectrum_scan(
            n=request.n,
            alpha=request.alpha,
            epsilon=request.epsilon,
            thetas=thetas,
            edge_cfg=cfg,
        )
        return schemas.SpectrumResponse(rows=[schemas.SpectrumRow(**r) for r in rows])

    @app.post("/api/lanczos", response_model=schemas.LanczosResponse)
    def lanczos(request: schemas.LanczosRequest) -> schemas.LanczosResponse:
        params = _chain_params(request.params)
        try:
            seed = SeedSpec.from_string(request.seed, params.n)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        couplings = build_coupling_matrices(params)
        hm = build_majorana_generator(couplings)
        bdg = build_bdg(couplings)
        cfg = _lanczos_config(request.settings)
        run_m, run_n, depth = dual_run(hm, bdg, seed, cfg)
        return schemas.LanczosResponse(
            majorana=_run_record(run_m, request.params),
            nambu=_run_record(run_n, request.params),
            mutual_stable_depth=depth,
            cross_check_tol=cfg.cross_check_tol,
        )

    @app.post("/api/diagnose", response_model=schemas.DiagnoseResponse)
    def diagnose(request: schemas.DiagnoseRequest) -> schemas.DiagnoseResponse:
        params = _chain_params(request.params)
        try:
            seed = SeedSpec.from_string(request.seed, params.n)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        couplings = build_coupling_matrices(params)
        hm = build_majorana_generator(couplings)
        bdg = build_bdg(couplings)
        run_m, _, depth = dual_run(hm, bdg, seed, _lanczos_config(request.settings))
        diag_cfg = DiagnosticsConfig(
            eta_tol=request.eta_tol, n_min=request.n_min, n_max=request.n_max
        )
        try:
            series = staggering(run_m, diag_cfg, n_stable=depth)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        entries = [
            schemas.StaggeringEntry(n=int(n), value=float(v), sign=int(s))
            for n, v, s in zip(series.pair_indices, series.values, series.signs)
        ]
        return schemas.DiagnoseResponse(
            params=request.params,
            seed=request.seed,
            n_stable=depth,
            n_cross=series.n_cross,
            krylov_phase=krylov_phase(series.n_cross),
            entries=entries,
        )

    @app.post("/api/oracle", response_model=schemas.OracleResponse)
    def oracle(request: schemas.OracleRequest) -> schemas.OracleResponse:
        params = ModelParams(
            n=request.n, alpha=request.alpha, theta=request.theta,
            epsilon=request.epsilon,
        )
        try:
            seed = SeedSpec.from_string(request.seed, params.n)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        report = oracle_report(params, seed)
        report["params"] = schemas.ChainParams(**report["params"])
        for key in ("b_deviation_majorana", "b_deviation_nambu"):
            if not math.isfinite(report[key]):
                report[key] = None
        return schemas.OracleResponse(**report)

    @app.post("/api/sweep/points", response_model=schemas.SweepPointsResponse)
    def sweep_points(request: schemas.SweepPointsRequest) -> schemas.SweepPointsResponse:
        spec = GridSpec(
            n=request.spec.n,
            epsilon=request.spec.epsilon,
            seed=request.spec.seed,
            alpha_points=request.spec.alpha_points,
            theta_points=request.spec.theta_points,
            alpha_max=request.spec.alpha_max,
            thresholds=tuple(request.spec.thresholds),
            primary_threshold=request.spec.primary_threshold,
            eta_tol=request.spec.eta_tol,
        )
        for i, j in request.cells:
            if not (1 <= i <= spec.alpha_points and 1 <= j <= spec.theta_points):
                raise HTTPException(status_code=422, detail=f"cell ({i}, {j}) off grid")
        points = compute_cells(spec, request.cells, workers=request.workers)
        return schemas.SweepPointsResponse(points=[_point_model(p) for p in points])

    return app


app = create_app()
