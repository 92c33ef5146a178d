"""Region-aware convergence analysis for smooth nonconvex optimization.

The package classifies points of a test function into derivative-defined
regions, runs six reference descent methods, and checks their observed
per-iteration progress against closed-form region-wise rate templates
and complexity bounds.
"""

from .objectives import (
    Objective,
    Evaluation,
    evaluate,
    fd_check,
    estimate_kappa,
    estimate_lipschitz,
    corpus_names,
    corpus_manifest,
    get_objective,
    quadratic,
)
from .subproblems import leftmost_eig, solve_tr, solve_cubic, TrSolution, CubicSolution
from .regions import (
    Region,
    RegionLabel,
    RegionParams,
    PClassification,
    ScanResult,
    classify,
    classify_witness,
    classify_p,
    delta_p,
    region_scan,
    scan_to_csv,
)
from .algorithms import (
    ALGORITHMS,
    AlgoConfig,
    IterateRecord,
    Trajectory,
    run,
    trajectory_to_csv,
    trajectory_to_json,
    trajectory_from_json,
)
from .bounds import (
    AlgoClass,
    RateContext,
    RateBound,
    BoundPhase,
    ComplexityBound,
    ContemporaryBound,
    FUNCTION_CLASSES,
    rate_template,
    complexity_bound,
    contemporary_bound,
    xi_linear_factor,
)
from .harness import (
    RateCheck,
    VerificationReport,
    count_Kf,
    calibrate_zeta_m,
    verify_run,
    envelope_compare,
)

__version__ = "0.1.0"

__all__ = [
    "Objective",
    "Evaluation",
    "evaluate",
    "fd_check",
    "estimate_kappa",
    "estimate_lipschitz",
    "corpus_names",
    "corpus_manifest",
    "get_objective",
    "quadratic",
    "leftmost_eig",
    "solve_tr",
    "solve_cubic",
    "TrSolution",
    "CubicSolution",
    "Region",
    "RegionLabel",
    "RegionParams",
    "PClassification",
    "ScanResult",
    "classify",
    "classify_witness",
    "classify_p",
    "delta_p",
    "region_scan",
    "scan_to_csv",
    "ALGORITHMS",
    "AlgoConfig",
    "IterateRecord",
    "Trajectory",
    "run",
    "trajectory_to_csv",
    "trajectory_to_json",
    "trajectory_from_json",
    "AlgoClass",
    "RateContext",
    "RateBound",
    "BoundPhase",
    "ComplexityBound",
    "ContemporaryBound",
    "FUNCTION_CLASSES",
    "rate_template",
    "complexity_bound",
    "contemporary_bound",
    "xi_linear_factor",
    "RateCheck",
    "VerificationReport",
    "count_Kf",
    "calibrate_zeta_m",
    "verify_run",
    "envelope_compare",
]
