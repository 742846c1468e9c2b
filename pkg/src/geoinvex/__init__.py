"""geoinvex: numerical verification of generalized convexity on simple
Riemannian charts.

The package provides closed-form geometry for two built-in charts, eta-map
machinery (directional derivatives, transport identities, self-referential
constructions), sampling-based verdict engines for the invexity and
monotonicity classes of order m, a minimizer / variational-inequality grid
scanner, and a config-driven report runner with a CLI entry point.
"""

__version__ = "0.1.0"

from .errors import (
    BasePointMismatch,
    DomainViolation,
    GeoinvexError,
    NoRoot,
    SchemaError,
    UnknownProblem,
    ZeroGradient,
)
from .fields import ScalarField, VectorField, constant_field
from .manifolds import Chart, Euclidean, Geodesic, PositiveOrthant2, Tangent, chart_from_name
from .eta import (
    ETA_EUCLIDEAN_DIFF,
    ETA_NEG_SQ_BOTH,
    ETA_NEG_SQ_FIRST,
    ETA_SHIFTED_NEG,
    ConditionCReport,
    EtaMap,
    IdentityVerdict,
    ResidualReport,
    check_condition_C,
    check_property_P,
    construct_invex_eta,
    directional_derivative,
    eval_eta,
    gradient_eta,
)
from .sampling import SampleScheme, Status, StrengthParams, Verdict, Witness
from .invexity import (
    ClosureReport,
    GeneralizedKind,
    GeodesicMode,
    InfimalReport,
    PreinvexInvexReport,
    check_closure_theorems,
    check_generalized_invex,
    check_infimal_preinvex,
    check_strongly_eta_invex,
    check_strongly_geodesic_convex,
    check_strongly_preinvex,
    cross_check_preinvex_invex,
    invexity_margins,
    preinvexity_margins,
)
from .monotonicity import (
    InvexMonotoneReport,
    MonotoneKind,
    check_invariant_eta_monotone,
    check_monotone_vector_field,
    cross_check_invex_monotone,
    gradient_field,
)
from .vvlip import (
    DominanceMode,
    MopProblem,
    ScanResult,
    check_strict_minimizer,
    check_vvlip_solution,
    scan_equivalence,
)
from .problems import FIELDS, ETAS, ProblemInstance, builtin_names, load_problem
from .report import normalized, run_check, run_suite, to_json, witnesses_csv

__all__ = [
    "BasePointMismatch",
    "Chart",
    "ClosureReport",
    "ConditionCReport",
    "DominanceMode",
    "DomainViolation",
    "ETA_EUCLIDEAN_DIFF",
    "ETA_NEG_SQ_BOTH",
    "ETA_NEG_SQ_FIRST",
    "ETA_SHIFTED_NEG",
    "ETAS",
    "EtaMap",
    "Euclidean",
    "FIELDS",
    "GeneralizedKind",
    "GeodesicMode",
    "Geodesic",
    "GeoinvexError",
    "IdentityVerdict",
    "InfimalReport",
    "InvexMonotoneReport",
    "MonotoneKind",
    "MopProblem",
    "NoRoot",
    "PositiveOrthant2",
    "PreinvexInvexReport",
    "ProblemInstance",
    "ResidualReport",
    "SampleScheme",
    "ScalarField",
    "ScanResult",
    "SchemaError",
    "Status",
    "StrengthParams",
    "Tangent",
    "UnknownProblem",
    "Verdict",
    "VectorField",
    "Witness",
    "ZeroGradient",
    "builtin_names",
    "chart_from_name",
    "check_closure_theorems",
    "check_condition_C",
    "check_generalized_invex",
    "check_infimal_preinvex",
    "check_invariant_eta_monotone",
    "check_monotone_vector_field",
    "check_property_P",
    "check_strict_minimizer",
    "check_strongly_eta_invex",
    "check_strongly_geodesic_convex",
    "check_strongly_preinvex",
    "check_vvlip_solution",
    "constant_field",
    "construct_invex_eta",
    "cross_check_invex_monotone",
    "cross_check_preinvex_invex",
    "directional_derivative",
    "eval_eta",
    "gradient_eta",
    "gradient_field",
    "invexity_margins",
    "load_problem",
    "normalized",
    "preinvexity_margins",
    "run_check",
    "run_suite",
    "scan_equivalence",
    "to_json",
    "witnesses_csv",
]
