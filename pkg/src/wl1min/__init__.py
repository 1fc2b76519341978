"""Weighted l1 sparse recovery: solvers, exact certificates, benchmarks.

The package has four layers: ``linops`` (dense linear algebra helpers and
the matrix/vector text format), ``solver`` (proximal-gradient continuation
with pluggable reweighting schemes), ``certificates`` (exact null-space and
isometry certificates plus a simplex LP oracle), and ``bench`` (seeded
random experiments).  ``cli`` binds them into the ``wl1min`` command.
"""

from .bench import (
    CellSummary,
    ExperimentGrid,
    GeneratedProblem,
    ProblemSpec,
    SchemeCell,
    SummaryStats,
    TrialResult,
    emit_results,
    emit_summary,
    generate_problem,
    load_grid,
    run_experiment,
    summarize,
    trial_seed,
)
from .certificates import (
    DominantSupportReport,
    DownweightInterval,
    EnumerationCapExceeded,
    InfeasibleSystem,
    NspReport,
    RicValue,
    RocValue,
    VertexSet,
    check_nsp,
    check_wnsp,
    compute_ric,
    compute_roc,
    dominant_support,
    downweight_interval,
    l1_min_exact,
    l1ball_section_vertices,
    recovery_trial,
    ric_bound_plain_order,
    ric_bound_plain_order_infimum,
    ric_bound_scaled_order,
)
from .linops import (
    as_index_set,
    as_matrix,
    as_vector,
    column_submatrix,
    kernel_basis,
    largest_gram_eigenvalue,
    matvec,
    read_matrix,
    read_vector,
    spectral_norm,
    subsets,
    write_matrix,
    write_vector,
)
from .solver import (
    Classic,
    Fixed,
    Identity,
    InnerResult,
    NullspaceGuided,
    SolveReport,
    SolverConfig,
    StageDiagnostics,
    WeightScheme,
    ista_stage,
    mu_schedule,
    soft_threshold,
    solve,
    update_weights_classic,
    update_weights_nullspace,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # linops
    "as_matrix",
    "as_vector",
    "as_index_set",
    "matvec",
    "largest_gram_eigenvalue",
    "spectral_norm",
    "kernel_basis",
    "column_submatrix",
    "subsets",
    "read_matrix",
    "write_matrix",
    "read_vector",
    "write_vector",
    # solver
    "Identity",
    "Classic",
    "NullspaceGuided",
    "Fixed",
    "WeightScheme",
    "SolverConfig",
    "InnerResult",
    "StageDiagnostics",
    "SolveReport",
    "soft_threshold",
    "mu_schedule",
    "ista_stage",
    "update_weights_classic",
    "update_weights_nullspace",
    "solve",
    # certificates
    "EnumerationCapExceeded",
    "InfeasibleSystem",
    "VertexSet",
    "NspReport",
    "DominantSupportReport",
    "DownweightInterval",
    "RicValue",
    "RocValue",
    "l1ball_section_vertices",
    "check_nsp",
    "check_wnsp",
    "dominant_support",
    "downweight_interval",
    "compute_ric",
    "compute_roc",
    "ric_bound_scaled_order",
    "ric_bound_plain_order",
    "ric_bound_plain_order_infimum",
    "l1_min_exact",
    "recovery_trial",
    # bench
    "ProblemSpec",
    "GeneratedProblem",
    "SchemeCell",
    "ExperimentGrid",
    "TrialResult",
    "CellSummary",
    "SummaryStats",
    "generate_problem",
    "trial_seed",
    "run_experiment",
    "summarize",
    "emit_results",
    "emit_summary",
    "load_grid",
]
