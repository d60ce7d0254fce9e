"""Finite-sample exact randomization-based confidence intervals.

Inverts the randomization test of a constant-effect null analytically:
instead of re-testing on a grid, it solves each alternative assignment's
crossing of the observed statistic in closed form, rebuilds the (possibly
non-monotonic) p-value step function, and squeezes the confidence bounds
jump by jump. Supports the difference in means and the studentized t over
the assignment space of a two-arm completely randomized experiment,
enumerated exactly or sampled by seeded Monte Carlo.
"""

import os as _os

# Honor the documented thread cap before the numeric stack spins up its
# thread pools. Only effective when rbci is imported before numpy.
_cap = _os.environ.get("RBCI_MAX_THREADS")
if _cap is not None:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _cap)

from .design import (  # noqa: E402
    DEFAULT_ENUMERATION_CAP,
    ReferenceSet,
    as_assignment,
    enumerate_cre,
    sample_cre,
)
from .errors import (  # noqa: E402
    CapExceeded,
    CrossedBounds,
    DegenerateVariance,
    EmptyInterval,
    EpsilonTooLarge,
    InternalInconsistency,
    InvalidDesign,
    RbciError,
)
from .invert import (  # noqa: E402
    ConfidenceInterval,
    Hypothesis,
    IntervalDiagnostics,
    JumpPoint,
    PValueStepFunction,
    classify_jump,
    collect_jumps,
    confidence_interval,
    p_value,
    probe_epsilon,
    recover_p_function,
    solve_jumps_dim,
    solve_jumps_t,
    squeeze_lower,
    squeeze_upper,
    validate_probe_epsilon,
)
from .oracle import ProbeGrid, oracle_p, oracle_sweep  # noqa: E402
from .simulate import (  # noqa: E402
    REPORT_CSV_HEADER,
    ScienceTable,
    SimulationConfig,
    SimulationReport,
    dgp_example1,
    dgp_normal,
    exact_sweep_example1,
    report_csv_row,
    run_replications,
)
from .stats import (  # noqa: E402
    Statistic,
    TDecomposition,
    difference_in_means,
    pooled_bilinear_variance,
    studentized_t,
    t_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "ConfidenceInterval",
    "CrossedBounds",
    "DEFAULT_ENUMERATION_CAP",
    "DegenerateVariance",
    "EmptyInterval",
    "EpsilonTooLarge",
    "Hypothesis",
    "InternalInconsistency",
    "IntervalDiagnostics",
    "InvalidDesign",
    "JumpPoint",
    "PValueStepFunction",
    "ProbeGrid",
    "RbciError",
    "REPORT_CSV_HEADER",
    "ReferenceSet",
    "ScienceTable",
    "SimulationConfig",
    "SimulationReport",
    "Statistic",
    "TDecomposition",
    "as_assignment",
    "classify_jump",
    "collect_jumps",
    "confidence_interval",
    "dgp_example1",
    "dgp_normal",
    "difference_in_means",
    "enumerate_cre",
    "exact_sweep_example1",
    "oracle_p",
    "oracle_sweep",
    "p_value",
    "pooled_bilinear_variance",
    "probe_epsilon",
    "recover_p_function",
    "report_csv_row",
    "run_replications",
    "sample_cre",
    "solve_jumps_dim",
    "solve_jumps_t",
    "squeeze_lower",
    "squeeze_upper",
    "studentized_t",
    "t_decomposition",
    "validate_probe_epsilon",
]
