"""Request/response models of the compute service."""

from __future__ import annotations

import math

from pydantic import BaseModel, Field, field_validator

from ..oracle import MAX_SITES
from ..sweep import DEFAULT_THRESHOLDS


class ChainParams(BaseModel):
    n: int = Field(ge=2, description="number of fermionic sites")
    alpha: float = Field(gt=0, description="power-law decay exponent")
    theta: float = Field(gt=0, lt=math.pi, description="interpolation angle (radians)")
    epsilon: float = Field(description="hopping-pairing imbalance")


class LanczosSettings(BaseModel):
    reorth_threshold: float = Field(default=1e-10, gt=0)
    b_floor: float = Field(default=1e-7, gt=0)
    orthogonality_tol: float = Field(default=1e-7, gt=0)
    cross_check_tol: float = Field(default=1e-7, gt=0)
    max_steps: int | None = Field(default=None, ge=1)


class SpectrumRequest(BaseModel):
    n: int = Field(ge=2)
    alpha: float = Field(gt=0)
    epsilon: float
    theta_points: int = Field(default=99, ge=1)
    window_size: int | None = Field(default=None, ge=1)


class SpectrumRow(BaseModel):
    theta_over_pi: float
    mode_index: int
    energy: float
    energy_normalized: float
    edge_weight: float


class SpectrumResponse(BaseModel):
    rows: list[SpectrumRow]


class LanczosRequest(BaseModel):
    params: ChainParams
    seed: str = "gamma1"
    settings: LanczosSettings = LanczosSettings()


class RunRecord(BaseModel):
    params: ChainParams
    seed: str
    representation: str
    b: list[float]
    a_max: float
    n_stable: int
    termination_reason: str
    eps_max: list[float]


class LanczosResponse(BaseModel):
    majorana: RunRecord
    nambu: RunRecord
    mutual_stable_depth: int
    cross_check_tol: float


class DiagnoseRequest(LanczosRequest):
    eta_tol: float = Field(default=0.0, ge=0)
    n_min: int = Field(default=2, ge=2)
    n_max: int | None = Field(default=None, ge=2)


class StaggeringEntry(BaseModel):
    n: int
    value: float
    sign: int


class DiagnoseResponse(BaseModel):
    params: ChainParams
    seed: str
    n_stable: int
    n_cross: int
    krylov_phase: str
    entries: list[StaggeringEntry]


class OracleRequest(BaseModel):
    n: int = Field(ge=1, le=MAX_SITES, description="site count (dense many-body cap)")
    alpha: float = Field(gt=0)
    theta: float = Field(gt=0, lt=math.pi)
    epsilon: float
    seed: str = "gamma1"


class OracleResponse(BaseModel):
    params: ChainParams
    seed: str
    anticommutator_residual: float
    trace_residual: float
    closure_residual: float
    hamiltonian_constant_offset_residual: float
    manybody_a_max: float
    manybody_krylov_dimension: int
    krylov_dimension_bound: int
    linear_sector_residual: float
    b_deviation_majorana: float | None
    b_deviation_nambu: float | None


class GridSpecModel(BaseModel):
    n: int = Field(ge=2)
    epsilon: float
    seed: str = "gamma1"
    alpha_points: int = Field(default=99, ge=1)
    theta_points: int = Field(default=99, ge=1)
    alpha_max: float = Field(default=3.0, gt=0)
    thresholds: list[float] = Field(default=list(DEFAULT_THRESHOLDS))
    primary_threshold: float = 0.1
    eta_tol: float = Field(default=0.0, ge=0)

    @field_validator("thresholds")
    @classmethod
    def _thresholds_in_range(cls, v: list[float]) -> list[float]:
        if not v or not all(0 < t < 1 for t in v):
            raise ValueError("thresholds must lie in (0, 1)")
        return v


class SweepPointsRequest(BaseModel):
    spec: GridSpecModel
    cells: list[tuple[int, int]]
    workers: int = Field(default=1, ge=1)


class PhasePointModel(BaseModel):
    i: int
    j: int
    alpha: float
    theta: float
    n_cross: int
    krylov_phase: str
    gap_phase: dict[str, str]
    # None encodes an empty class (gap = +inf), which strict JSON cannot carry
    delta_edge: dict[str, float | None]
    delta_bulk: dict[str, float | None]
    n_stable: int
    termination: str
    error: str | None = None


class SweepPointsResponse(BaseModel):
    points: list[PhasePointModel]


class HealthResponse(BaseModel):
    status: str
    version: str
