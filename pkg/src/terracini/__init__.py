"""Exact Terracini defects and locus membership for double points on Segre embeddings.

The package is organized in four layers: ``exactla`` (certified integer
ranks), ``segre`` (spaces, points, conditions matrices and cohomology counts),
``schemes`` (zero-dimensional schemes and the residual calculus), ``locus``
(membership, three-point classification, named families and searches) and a
``cli`` front end.
"""

from .errors import (
    BadParams,
    BadPermutation,
    EmptyProjection,
    InconsistentRank,
    InvariantViolation,
    NotPrime,
    ParseError,
    ShapeMismatch,
    SingularMap,
    WrongCardinality,
)
from .exactla import (
    IntMatrix,
    clear_denominators,
    is_prime,
    kron,
    rank_checked,
    rank_fraction_free,
    rank_modular,
)
from .locus import (
    MembershipReport,
    PatternTag,
    SecantEstimate,
    build_a40,
    build_ex1,
    build_g0,
    build_kk1,
    classify3,
    enumerate_spaces,
    max_defect_search,
    membership,
    predicted_in_T3,
    secant_dim_estimate,
    verify_classification,
)
from .schemes import (
    CoordinateDivisor,
    ResidualReport,
    ZeroDimScheme,
    check_residual_inequalities,
    double_scheme,
    residue,
    trace,
)
from .segre import (
    DEFAULT_PRIMES,
    CohomologyReport,
    MppPoint,
    Multidegree,
    MultiprojectiveSpace,
    PointConfiguration,
    apply_transform,
    cohomology,
    conditions_matrix,
    delta,
    is_minimal,
    minimal_space,
    permute_factors,
    section_count,
    segre_vector,
    tangent_rows,
)

__version__ = "0.1.0"

__all__ = [
    "BadParams",
    "BadPermutation",
    "CohomologyReport",
    "CoordinateDivisor",
    "DEFAULT_PRIMES",
    "EmptyProjection",
    "InconsistentRank",
    "IntMatrix",
    "InvariantViolation",
    "MembershipReport",
    "MppPoint",
    "Multidegree",
    "MultiprojectiveSpace",
    "NotPrime",
    "ParseError",
    "PatternTag",
    "PointConfiguration",
    "ResidualReport",
    "SecantEstimate",
    "ShapeMismatch",
    "SingularMap",
    "WrongCardinality",
    "ZeroDimScheme",
    "apply_transform",
    "build_a40",
    "build_ex1",
    "build_g0",
    "build_kk1",
    "check_residual_inequalities",
    "classify3",
    "clear_denominators",
    "cohomology",
    "conditions_matrix",
    "delta",
    "double_scheme",
    "enumerate_spaces",
    "is_minimal",
    "is_prime",
    "kron",
    "max_defect_search",
    "membership",
    "minimal_space",
    "permute_factors",
    "predicted_in_T3",
    "rank_checked",
    "rank_fraction_free",
    "rank_modular",
    "residue",
    "secant_dim_estimate",
    "section_count",
    "segre_vector",
    "tangent_rows",
    "trace",
    "verify_classification",
]
