"""Long-range Kitaev chain toolkit.

Builds the open-boundary long-range Kitaev chain in its coupling, BdG, and
Majorana representations, runs the exact single-particle operator Lanczos
recursion with stability gating, extracts the Krylov staggering diagnostic,
and sweeps joint (crossing count, edge/bulk gap) phase diagrams.
"""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    BdGMatrix,
    CouplingMatrices,
    MajoranaGenerator,
    ModelParams,
    build_bdg,
    build_coupling_matrices,
    build_majorana_generator,
)
from .spectrum import (  # noqa: F401
    EdgeConfig,
    GapClassification,
    ModeSet,
    classify_gaps,
    diagonalize_bdg,
    edge_weight,
)
from .lanczos import (  # noqa: F401
    KrylovState,
    LanczosConfig,
    LanczosRun,
    SeedSpec,
    TridiagonalT,
    build_tridiagonal,
    cross_check,
    evolve_krylov,
    lanczos_majorana,
    lanczos_nambu,
)
from .diagnostics import (  # noqa: F401
    DiagnosticsConfig,
    StaggeringSeries,
    crossing_count,
    staggering,
)
from .sweep import GridSpec, PhasePoint, agreement_report, run_sweep  # noqa: F401
