"""Logarithmic Mahler measure and Weil height for rationals, quadratic
irrationals and surds, plus the exact stability classification of quadratics
and field norms down to Q.

Measures are natural-log floats.  All dichotomies (stable/unstable, degree
reduction, squarefreeness) are decided in exact integer arithmetic; floating
point only ever enters when a final log is taken.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .arith import factorize
from .errors import InvalidInput, NotSquarefree

STABLE_OUTSIDE = "stable_outside"
STABLE_ON_CIRCLE = "stable_on_circle"
STABLE_INSIDE = "stable_inside"
UNSTABLE = "unstable"


def _is_perfect_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _iroot(n: int, k: int) -> tuple[int, bool]:
    """Integer k-th root of n >= 0: (floor root, exact?)."""
    if n < 0:
        raise InvalidInput("negative radicand")
    if n in (0, 1) or k == 1:
        return n, True
    r = round(n ** (1.0 / k))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r, r**k == n


@dataclass(frozen=True)
class QuadraticNumber:
    """A degree-2 algebraic number, the root (-b + root*sqrt(b^2-4ac))/(2a)
    of its primitive minimal polynomial a*x^2 + b*x + c over the integers.

    root is +1 or -1 and selects which conjugate; a > 0, gcd(a,b,c) = 1,
    c != 0 and the discriminant is not a perfect square (so the polynomial
    is irreducible and the number has degree exactly 2).
    """

    a: int
    b: int
    c: int
    root: int = 1

    def __post_init__(self) -> None:
        if self.a <= 0:
            raise InvalidInput("leading coefficient must be positive")
        if self.c == 0:
            raise InvalidInput("constant coefficient must be nonzero (0 is a root)")
        if math.gcd(math.gcd(self.a, abs(self.b)), abs(self.c)) != 1:
            raise InvalidInput("coefficients must be primitive (gcd 1)")
        if self.root not in (1, -1):
            raise InvalidInput("root selector must be +1 or -1")
        if _is_perfect_square(self.discriminant()):
            raise InvalidInput(
                f"x^2 polynomial ({self.a},{self.b},{self.c}) is reducible over Q"
            )

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, self.b, self.c, -self.root)

    def polynomial_str(self) -> str:
        head = "x^2" if self.a == 1 else f"{self.a}x^2"
        parts = [head]
        if self.b:
            term = "x" if abs(self.b) == 1 else f"{abs(self.b)}x"
            parts.append(f"{'+' if self.b > 0 else '-'} {term}")
        parts.append(f"{'+' if self.c > 0 else '-'} {abs(self.c)}")
        return " ".join(parts)

    def approx(self) -> complex:
        """Floating point value of the selected root."""
        d = self.discriminant()
        s = math.sqrt(d) if d >= 0 else math.sqrt(-d) * 1j
        return (-self.b + self.root * s) / (2 * self.a)

    def __str__(self) -> str:
        sign = "+" if self.root == 1 else "-"
        return f"{self.a},{self.b},{self.c},{sign}"


@dataclass(frozen=True)
class Surd:
    """The positive real k-th root of a positive rational base."""

    base: Fraction
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", Fraction(self.base))
        if self.base <= 0:
            raise InvalidInput("surd base must be positive")
        if self.k < 1:
            raise InvalidInput("surd index must be a positive integer")

    def approx(self) -> float:
        return float(self.base) ** (1.0 / self.k)

    def __str__(self) -> str:
        b = self.base
        if self.k == 1:
            return str(b)
        btxt = str(b) if b.denominator == 1 else f"({b})"
        return f"{btxt}^(1/{self.k})"


def surd_reduce(s: Surd) -> Surd:
    """Canonical form: extract the largest g | k with base a perfect g-th
    power, so the result's base is not a perfect p-th power for any prime
    p dividing the (possibly smaller) index."""
    base, k = s.base, s.k
    for g in range(k, 1, -1):
        if k % g != 0:
            continue
        rn, okn = _iroot(base.numerator, g)
        rd, okd = _iroot(base.denominator, g)
        if okn and okd:
            return Surd(Fraction(rn, rd), k // g)
    return Surd(base, k)


def surd_degree(s: Surd) -> int:
    """Degree of the surd over Q (index of its reduced form).

    For a positive rational base this is exact: x^j - base is irreducible
    once base is not a perfect p-th power for any prime p | j.
    """
    return surd_reduce(s).k


def mahler_rational(q: Fraction | int) -> float:
    """M(m/n) = log max(|m|, n) for a reduced fraction; 0 on the units."""
    q = Fraction(q)
    if q == 0:
        raise InvalidInput("Mahler measure of 0 is undefined")
    return math.log(max(abs(q.numerator), q.denominator))


def mahler_quadratic(alpha: QuadraticNumber) -> float:
    """log a + log+|r1| + log+|r2| over both conjugates.

    The larger root modulus is computed first from |b| + sqrt(disc) (no
    cancellation), the smaller from the exact product |c/a|.
    """
    a, b, c = alpha.a, alpha.b, alpha.c
    d = alpha.discriminant()
    if d < 0:
        # Complex pair: common squared modulus is exactly c/a.
        return math.log(a) + max(0.0, math.log(c / a))
    big = (abs(b) + math.sqrt(d)) / (2 * a)
    small = abs(c / a) / big
    return math.log(a) + max(0.0, math.log(big)) + max(0.0, math.log(small))


def is_stable_quadratic(alpha: QuadraticNumber) -> str:
    """Classify where the two conjugates sit relative to the unit circle.

    Decided purely in integer arithmetic: unstable iff |a+c| <= |b|; stable
    quadratics split by |a| vs |c| (product of root moduli is |c|/|a|).
    """
    a, b, c = alpha.a, alpha.b, alpha.c
    if abs(a + c) <= abs(b):
        return UNSTABLE
    if a < abs(c):
        return STABLE_OUTSIDE
    if a == abs(c):
        return STABLE_ON_CIRCLE
    return STABLE_INSIDE


def mahler_surd(s: Surd) -> float:
    """M(D^(1/k)) = log D for a squarefree integer base D >= 2.

    x^k - D is irreducible for squarefree D (each prime dividing D does not
    divide the leading coefficient and divides D exactly once), all k roots
    share modulus D^(1/k), and their log-moduli sum to log D.
    """
    if s.base.denominator != 1:
        raise NotSquarefree(f"base {s.base} is not a squarefree integer")
    d = s.base.numerator
    if d < 2:
        raise NotSquarefree(f"base {d} must be a squarefree integer >= 2")
    if not factorize(d).is_squarefree():
        raise NotSquarefree(f"base {d} has a square factor")
    return math.log(d)


def mahler(x: Fraction | int | QuadraticNumber | Surd) -> float:
    """Mahler measure of any supported algebraic-number shape.

    For surds of arbitrary positive rational base the measure is computed
    through the canonical reduced form: M = log max(num, den) of the reduced
    base.  (For non-squarefree or rational bases with k > 1 this extends the
    squarefree-integer case by the same minimal-polynomial argument.)
    """
    if isinstance(x, QuadraticNumber):
        return mahler_quadratic(x)
    if isinstance(x, Surd):
        return mahler_rational(surd_reduce(x).base)
    return mahler_rational(x)


def degree(x: Fraction | int | QuadraticNumber | Surd) -> int:
    if isinstance(x, QuadraticNumber):
        return 2
    if isinstance(x, Surd):
        return surd_degree(x)
    return 1


def weil_height(x: Fraction | int | QuadraticNumber | Surd) -> float:
    """h(x) = M(x) / deg(x)."""
    return mahler(x) / degree(x)


def norm_quadratic(alpha: QuadraticNumber) -> Fraction:
    """Field norm down to Q: the product of the two conjugates, c/a."""
    return Fraction(alpha.c, alpha.a)


def norm_surd(s: Surd) -> Fraction:
    """Field norm of a surd down to Q: +/- reduced_base.

    The conjugates of a surd are root-of-unity multiples of it, so the norm
    is (-1)^(deg+1) times the reduced base (the constant-term sign of
    x^deg - base), and its Mahler measure matches the surd's.
    """
    r = surd_reduce(s)
    return r.base if r.k % 2 == 1 else -r.base


_QUAD_RE = re.compile(r"^\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*(?:,\s*([+-])\s*)?$")
_SURD_RE = re.compile(
    r"^\s*(?:\(\s*(-?\d+)\s*/\s*(\d+)\s*\)|(-?\d+))\s*\^\s*\(\s*1\s*/\s*(\d+)\s*\)\s*$"
)


def parse_quadratic(text: str) -> QuadraticNumber:
    """Parse `a,b,c[,+|-]` into a QuadraticNumber (default root: +)."""
    m = _QUAD_RE.match(text)
    if not m:
        raise InvalidInput(f"cannot parse quadratic {text!r} (expected a,b,c[,+|-])")
    a, b, c = int(m.group(1)), int(m.group(2)), int(m.group(3))
    root = -1 if m.group(4) == "-" else 1
    if a < 0:
        a, b, c = -a, -b, -c  # same polynomial up to sign
    return QuadraticNumber(a, b, c, root)


def parse_surd(text: str) -> Surd:
    """Parse `D^(1/k)` or `(m/n)^(1/k)`; a bare rational means k = 1."""
    m = _SURD_RE.match(text)
    if m:
        k = int(m.group(4))
        if m.group(3) is not None:
            base = Fraction(int(m.group(3)))
        else:
            base = Fraction(int(m.group(1)), int(m.group(2)))
        return Surd(base, k)
    try:
        return Surd(Fraction(text.strip()), 1)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(
            f"cannot parse surd {text!r} (expected D^(1/k) or (m/n)^(1/k))"
        ) from None
