"""mahlerkit: certified Mahler measures, heights, explicit lower bounds for
linear forms in logarithms, exact matrix lemmas, and integer scans."""

from .algnum import (
    AlgebraicNumber,
    ProjectivePoint,
    height_rational,
    height_subadditivity_check,
    mahler_measure_integral,
    mahler_measure_roots,
    projective_height_rational,
    weil_height,
)
from .balls import ComplexBall, RealBall
from .bounds import (
    BoundContext,
    BoundValue,
    HypothesisReport,
    bound_conjecture,
    bound_feldman,
    bound_mahler_exp,
    bound_mahler_log,
    bound_nw,
    bound_rw,
    kappa,
    liouville_linear_form,
    phi1,
    phi2,
    theta,
    validate_nw,
)
from .errors import (
    BudgetExceeded,
    DegenerateExponent,
    DomainError,
    HypothesisViolation,
    MahlerkitError,
    MissingConstant,
    PrecisionBudgetExceeded,
    QuadratureDivergence,
    RankMismatch,
    RationalDetected,
    RootIsolationFailure,
    ZeroDenominator,
    ZeroVector,
)
from .intpoly import IntPolynomial
from .matrixlab import (
    FactorizationCertificate,
    LogMatrix,
    RationalMatrix,
    audit_theorem1_params,
    audit_theorem1_sweep,
    audit_theorem2_params,
    lemma1_bound,
    lemma1_check,
    lemma2_factor,
    lemma3_count,
    lic_check_box,
)
from .roots import RootEnclosure, isolate_roots, refine_enclosure
from .search import (
    ScanRecord,
    convergents,
    mahler_problem_probe,
    mahler_sequence,
    nearest_int_distance,
    scan_exp,
    scan_log,
)

__version__ = "0.1.0"

__all__ = [
    # interval arithmetic
    "ComplexBall",
    "RealBall",
    # polynomials and roots
    "IntPolynomial",
    "RootEnclosure",
    "isolate_roots",
    "refine_enclosure",
    # measures and heights
    "AlgebraicNumber",
    "ProjectivePoint",
    "height_rational",
    "height_subadditivity_check",
    "mahler_measure_integral",
    "mahler_measure_roots",
    "projective_height_rational",
    "weil_height",
    # lower bound families
    "BoundContext",
    "BoundValue",
    "HypothesisReport",
    "bound_conjecture",
    "bound_feldman",
    "bound_mahler_exp",
    "bound_mahler_log",
    "bound_nw",
    "bound_rw",
    "kappa",
    "liouville_linear_form",
    "phi1",
    "phi2",
    "theta",
    "validate_nw",
    # matrix lemmas and audits
    "FactorizationCertificate",
    "LogMatrix",
    "RationalMatrix",
    "audit_theorem1_params",
    "audit_theorem1_sweep",
    "audit_theorem2_params",
    "lemma1_bound",
    "lemma1_check",
    "lemma2_factor",
    "lemma3_count",
    "lic_check_box",
    # scans and sequences
    "ScanRecord",
    "convergents",
    "mahler_problem_probe",
    "mahler_sequence",
    "nearest_int_distance",
    "scan_exp",
    "scan_log",
    # errors
    "MahlerkitError",
    "BudgetExceeded",
    "DegenerateExponent",
    "DomainError",
    "HypothesisViolation",
    "MissingConstant",
    "PrecisionBudgetExceeded",
    "QuadratureDivergence",
    "RankMismatch",
    "RationalDetected",
    "RootIsolationFailure",
    "ZeroDenominator",
    "ZeroVector",
    "__version__",
]
