"""t-metric Mahler measures of k-th roots of squarefree integers, and the
attainment question inside the real quadratic field Q(sqrt(D)).

For squarefree D = p_1 ... p_L (primes decreasing) the infimum in
M_t(D^(1/k)) equals the L_t norm of (log p_1, ..., log p_L) and is attained
by the prime roots p_l^(1/k).  Whether it can be attained by points of
Q(sqrt(D)) itself is decided by the size test D < p_1^2: when it holds,
sqrt(p_1 / (p_2...p_L)) together with the rational primes p_2, ..., p_L is
an attaining set; when it fails, an exhaustive enumeration of the only
possible quadratic factor shapes (a x^2 - p and a x^2 +/- p x + p with
0 < a < p and discriminant D times a square) comes up empty, which rules
out every decomposition inside the field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import factorize, is_prime
from .errors import (
    InvalidInput,
    NotSquarefree,
    ProductMismatch,
    TOutOfRange,
    WrongRegime,
)
from .measure import (
    QuadraticNumber,
    Surd,
    UNSTABLE,
    is_stable_quadratic,
    mahler,
    surd_reduce,
)
from .ratopt import INF, check_t, tnorm

MEASURE_TOL = 1e-9

MixedFactor = Fraction | int | QuadraticNumber | Surd


def squarefree_primes(D: int) -> tuple[int, ...]:
    """Prime factors of a squarefree D >= 2, in decreasing order."""
    if D < 2:
        raise NotSquarefree(f"D must be a squarefree integer >= 2, got {D}")
    fac = factorize(D)
    if not fac.is_squarefree():
        raise NotSquarefree(f"{D} has a square factor")
    return tuple(sorted(fac.primes(), reverse=True))


def metric_mahler_surd(D: int, k: int, t: float) -> tuple[float, list[Surd]]:
    """Value and attaining witness for M_t(D^(1/k)), D squarefree, k >= 1.

    The value depends only on the primes of D, not on k; the witness is the
    list of prime k-th roots, largest prime first.
    """
    t = check_t(t)
    if k < 1:
        raise InvalidInput(f"k must be a positive integer, got {k}")
    primes = squarefree_primes(D)
    value = tnorm([math.log(p) for p in primes], t)
    witness = [Surd(Fraction(p), k) for p in primes]
    return value, witness


def _require_t_above_one(t: float) -> float:
    t = check_t(t)
    if t <= 1:
        raise TOutOfRange(f"this operation is defined for t > 1, got {t}")
    return t


@dataclass(frozen=True)
class NonAttainmentCertificate:
    """Machine-checkable record of the exhaustive quadratic-factor search.

    An empty candidate list over the full range certifies that no
    decomposition inside Q(sqrt(D)) attains the infimum when D >= p^2.
    """

    D: int
    p: int
    a_range: tuple[int, int]
    forms_checked: tuple[str, ...]
    candidates: tuple[QuadraticNumber, ...]
    examined: int

    @property
    def empty(self) -> bool:
        return not self.candidates

    def to_dict(self) -> dict:
        return {
            "forms_checked": list(self.forms_checked),
            "a_range": list(self.a_range),
            "examined": self.examined,
            "candidates": [str(c) for c in self.candidates],
        }


@dataclass(frozen=True)
class AttainmentReport:
    """Outcome of the attainment decision in Q(sqrt(D)) for one (D, t)."""

    D: int
    primes: tuple[int, ...]
    t: float
    attained: bool
    witness: tuple[MixedFactor, ...] | None
    value: float
    certificate: NonAttainmentCertificate | None

    def to_dict(self) -> dict:
        return {
            "D": self.D,
            "primes": list(self.primes),
            "t": "inf" if self.t == INF else self.t,
            "attained": self.attained,
            "witness": None if self.witness is None else [str(w) for w in self.witness],
            "value": self.value,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
        }


_FORMS = ("a*x^2 - p", "a*x^2 + p*x + p", "a*x^2 - p*x + p")


def _square_multiple_of(delta: int, D: int) -> int | None:
    """Return v > 0 with delta = D * v^2, or None.  Exact integer checks."""
    if delta <= 0 or delta % D != 0:
        return None
    w = delta // D
    v = math.isqrt(w)
    return v if v * v == w else None


def enumerate_small_quadratics(D: int, p: int | None = None) -> list[QuadraticNumber]:
    """All quadratics in Q(sqrt(D)) with measure exactly log p whose norm
    numerator is divisible by p, for a prime divisor p of D (default: the
    largest).

    Only two primitive polynomial shapes are possible, a x^2 - p and
    a x^2 +/- p x + p with 0 < a < p; membership in Q(sqrt(D)) is the exact
    discriminant condition disc = D * v^2.  Every surviving candidate is
    stable with both conjugates outside the unit circle.
    """
    primes = squarefree_primes(D)
    if p is None:
        p = primes[0]
    elif p not in primes or not is_prime(p):
        raise InvalidInput(f"{p} is not a prime divisor of {D}")
    out: list[QuadraticNumber] = []
    for a in range(1, p):
        # shape a*x^2 - p (the +p sign gives a negative discriminant and
        # an imaginary field, so it can never match a positive D)
        v = _square_multiple_of(4 * a * p, D)
        if v is not None:
            cand = QuadraticNumber(a, 0, -p)
            if is_stable_quadratic(cand) != UNSTABLE:
                out.append(cand)
        # shapes a*x^2 +/- p*x + p
        v = _square_multiple_of(p * (p - 4 * a), D)
        if v is not None:
            for b in (p, -p):
                cand = QuadraticNumber(a, b, p)
                if is_stable_quadratic(cand) != UNSTABLE:
                    out.append(cand)
    return out


def _enumeration_certificate(D: int, p: int) -> NonAttainmentCertificate:
    candidates = enumerate_small_quadratics(D, p)
    return NonAttainmentCertificate(
        D=D,
        p=p,
        a_range=(1, p - 1),
        forms_checked=_FORMS,
        candidates=tuple(candidates),
        examined=4 * (p - 1),
    )


def attainment_in_quadratic_field(D: int, t: float) -> AttainmentReport:
    """Decide whether the infimum in M_t(sqrt(D)) is attained by points of
    Q(sqrt(D)), for t > 1.  Attained exactly when D < p_1^2.

    When attained, returns the witness sqrt(p_1/(p_2...p_L)), p_2, ..., p_L
    whose factor measures are exactly (log p_1, ..., log p_L).  When not
    attained, carries the empty-enumeration certificate.
    """
    t = _require_t_above_one(t)
    primes = squarefree_primes(D)
    p1 = primes[0]
    rest = D // p1
    value, _ = metric_mahler_surd(D, 2, t)
    if D < p1 * p1:
        # The size test is exactly what makes the surd factor's measure
        # equal log p_1 (its minimal polynomial is rest * x^2 - p_1).
        if rest >= p1:
            raise AssertionError("D < p1^2 must imply p_2...p_L < p_1")
        witness: tuple[MixedFactor, ...] = (Surd(Fraction(p1, rest), 2),) + tuple(
            Fraction(p) for p in primes[1:]
        )
        head_measure = mahler(witness[0])
        if abs(head_measure - math.log(p1)) > MEASURE_TOL:
            raise AssertionError("witness surd must have measure log p_1")
        return AttainmentReport(D, primes, t, True, witness, value, None)
    certificate = _enumeration_certificate(D, p1)
    return AttainmentReport(D, primes, t, False, None, value, certificate)


def certify_non_attainment(D: int, t: float) -> NonAttainmentCertificate:
    """Re-run the exhaustive factor-shape enumeration for the non-attained
    regime D >= p_1^2 and return its (expected empty) record."""
    t = _require_t_above_one(t)
    primes = squarefree_primes(D)
    p1 = primes[0]
    if D < p1 * p1:
        raise WrongRegime(f"D = {D} < {p1}^2: the infimum is attained in the field")
    return _enumeration_certificate(D, p1)


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    reason: str | None
    measures: tuple[float, ...]
    value: float


def _field_embedding(x: MixedFactor, D: int) -> tuple[Fraction, Fraction] | None:
    """Write x as u + w*sqrt(D) with rational u, w, or None if x is not in
    Q(sqrt(D)) (or is not recognizably so)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(0)
    if isinstance(x, QuadraticNumber):
        v = _square_multiple_of(x.discriminant(), D)
        if v is None:
            return None
        return Fraction(-x.b, 2 * x.a), Fraction(x.root * v, 2 * x.a)
    reduced = surd_reduce(x)
    if reduced.k == 1:
        return reduced.base, Fraction(0)
    if reduced.k == 2:
        m, n = reduced.base.numerator, reduced.base.denominator
        v = _square_multiple_of(m * n, D)
        if v is not None:
            # sqrt(m/n) = sqrt(m*n)/n = (v/n) * sqrt(D)
            return Fraction(0), Fraction(v, n)
    return None


def _radical_exponents(factors: tuple[MixedFactor, ...]) -> tuple[dict[int, Fraction], int]:
    """Exponent vector over primes for a product of rationals and surds,
    plus the sign of the rational part."""
    exps: dict[int, Fraction] = {}
    sign = 1

    def add(n: int, scale: Fraction) -> None:
        for prime, e in factorize(n).factors:
            exps[prime] = exps.get(prime, Fraction(0)) + e * scale
            if exps[prime] == 0:
                del exps[prime]

    for x in factors:
        if isinstance(x, (int, Fraction)):
            q = Fraction(x)
            if q == 0:
                raise InvalidInput("decomposition factors must be nonzero")
            if q < 0:
                sign = -sign
            add(abs(q.numerator), Fraction(1))
            add(q.denominator, Fraction(-1))
        elif isinstance(x, Surd):
            add(x.base.numerator, Fraction(1, x.k))
            add(x.base.denominator, Fraction(-1, x.k))
        else:
            raise InvalidInput("exponent route cannot express a quadratic factor")
    return exps, sign


def _check_product(factors: tuple[MixedFactor, ...], D: int, k: int) -> None:
    """Verify symbolically that the factors multiply to D^(1/k) exactly."""
    has_quadratic = any(isinstance(x, QuadraticNumber) for x in factors)
    if has_quadratic:
        if k > 2:
            raise InvalidInput(
                "cannot verify a quadratic factor against a root of index > 2"
            )
        prod = (Fraction(1), Fraction(0))
        for x in factors:
            emb = _field_embedding(x, D)
            if emb is None:
                raise ProductMismatch(
                    f"factor {x} does not lie in Q(sqrt({D})); "
                    "the product cannot be verified in the field"
                )
            u1, w1 = prod
            u2, w2 = emb
            prod = (u1 * u2 + w1 * w2 * D, u1 * w2 + u2 * w1)
        target = (Fraction(0), Fraction(1)) if k == 2 else (Fraction(D), Fraction(0))
        if prod != target:
            raise ProductMismatch(
                f"factor product is {prod[0]} + {prod[1]}*sqrt({D}), "
                f"expected {'sqrt(' + str(D) + ')' if k == 2 else D}"
            )
        return
    exps, sign = _radical_exponents(factors)
    target_exps = {p: Fraction(1, k) for p in squarefree_primes(D)}
    if sign != 1 or exps != target_exps:
        raise ProductMismatch(
            f"factor exponent vector {exps} (sign {sign}) does not match "
            f"{D}^(1/{k})"
        )


def validate_attaining_decomposition(
    D: int, k: int, t: float, factors: tuple[MixedFactor, ...] | list[MixedFactor]
) -> ValidationResult:
    """Check whether a factorization of D^(1/k) attains the infimum at t > 1.

    For finite t the multiset of nonzero factor measures must be exactly
    {log p_1, ..., log p_L}; at t = inf only the maximum matters and must
    equal log p_1.  The factor product is verified symbolically first and a
    mismatch raises ProductMismatch.
    """
    t = _require_t_above_one(t)
    if k < 1:
        raise InvalidInput(f"k must be a positive integer, got {k}")
    primes = squarefree_primes(D)
    factors = tuple(factors)
    if not factors:
        raise InvalidInput("decomposition must have at least one factor")
    _check_product(factors, D, k)
    measures = tuple(mahler(x) for x in factors)
    value = tnorm(measures, t)
    if t == INF:
        expected = math.log(primes[0])
        if abs(max(measures) - expected) > MEASURE_TOL:
            return ValidationResult(
                False,
                f"max factor measure {max(measures):.12g} != log p_1 = {expected:.12g}",
                measures,
                value,
            )
        return ValidationResult(True, None, measures, value)
    nonzero = sorted(m for m in measures if m > MEASURE_TOL)
    expected_multiset = sorted(math.log(p) for p in primes)
    if len(nonzero) != len(expected_multiset) or any(
        abs(a - b) > MEASURE_TOL for a, b in zip(nonzero, expected_multiset)
    ):
        return ValidationResult(
            False,
            "nonzero factor measures "
            f"{[round(m, 9) for m in nonzero]} are not the multiset "
            f"{{log p : p | {D}}}",
            measures,
            value,
        )
    return ValidationResult(True, None, measures, value)
