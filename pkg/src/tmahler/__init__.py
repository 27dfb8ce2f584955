"""Exact t-metric Mahler measures for rationals, quadratic irrationals and
surds, with optimal decompositions and attainment certificates in real
quadratic fields."""

from .arith import (
    Factorization,
    divides_rational,
    factorize,
    format_rational,
    gcd_chain,
    is_prime,
    nu,
    parse_rational,
)
from .errors import (
    DivisibilityViolation,
    DomainError,
    FactorizationOverflow,
    InvalidInput,
    InvalidT,
    NotPrime,
    NotSquarefree,
    ProductMismatch,
    TOutOfRange,
    TooLarge,
    WrongRegime,
)
from .measure import (
    QuadraticNumber,
    STABLE_INSIDE,
    STABLE_ON_CIRCLE,
    STABLE_OUTSIDE,
    Surd,
    UNSTABLE,
    degree,
    is_stable_quadratic,
    mahler,
    mahler_quadratic,
    mahler_rational,
    mahler_surd,
    norm_quadratic,
    norm_surd,
    parse_quadratic,
    parse_surd,
    surd_degree,
    surd_reduce,
    weil_height,
)
from .quadfield import (
    AttainmentReport,
    NonAttainmentCertificate,
    ValidationResult,
    attainment_in_quadratic_field,
    certify_non_attainment,
    enumerate_small_quadratics,
    metric_mahler_surd,
    squarefree_primes,
    validate_attaining_decomposition,
)
from .ratopt import (
    INF,
    RationalDecomposition,
    metric_mahler_rational,
    metric_mahler_rational_oracle,
    mt_curve,
    parse_t,
    reduce_to_rational_decomposition,
    tnorm,
)

__version__ = "0.1.0"
