"""Exact integer and rational arithmetic: factorization, valuations, gcd chains.

Rationals are plain ``fractions.Fraction`` values (always reduced, arbitrary
precision, and they parse/print exactly as ``[-]num/den`` or ``[-]num``).
Integers are plain Python ints.  Everything here is a pure function on
immutable values and is safe to call from any thread.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    DivisibilityViolation,
    FactorizationOverflow,
    InvalidInput,
    NotPrime,
)

# Largest integer factorize() accepts.  Inputs are desk scale; beyond this
# bound Pollard rho stops being a sane tool and we fail loudly instead of
# stalling or silently returning a partial factorization.
FACTORIZE_BOUND = 2**96

# Trial-division stage: all prime factors below this bound are stripped by
# direct division before the rho stage.  Rho handles anything bigger in
# microseconds, so a small bound keeps bulk factorization fast.
_TRIAL_BOUND = 4096

_SMALL_PRIMES = []


def _sieve_small_primes() -> list[int]:
    if not _SMALL_PRIMES:
        sieve = bytearray([1]) * _TRIAL_BOUND
        sieve[0:2] = b"\x00\x00"
        for i in range(2, math.isqrt(_TRIAL_BOUND) + 1):
            if sieve[i]:
                sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
        _SMALL_PRIMES.extend(i for i in range(_TRIAL_BOUND) if sieve[i])
    return _SMALL_PRIMES


# Strong-pseudoprime witness sets.  The first 13 primes are a proven
# deterministic witness set below 3.3e24 (Sorenson-Webster); for the tail up
# to FACTORIZE_BOUND we extend with every prime to 97, for which no
# counterexample is known.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_PROVEN_BOUND = 3_317_044_064_679_887_385_961_981
_MR_EXTRA_BASES = (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 0 <= n <= 2**96."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    bases = _MR_BASES if n < _MR_PROVEN_BOUND else _MR_BASES + _MR_EXTRA_BASES
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Return a nontrivial factor of odd composite n (Brent's cycle variant).

    Deterministic: fixed starting points and polynomial increments, so the
    whole factorization pipeline gives byte-identical output across runs.
    """
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            # Backtrack one step at a time from the saved position.
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1  # cycle collapsed to a fixed point; retry with a new increment


@dataclass(frozen=True)
class Factorization:
    """Complete prime factorization: ((p1, e1), ...) with p1 < p2 < ...

    The empty tuple is the factorization of 1.
    """

    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        """Reconstruct the factored integer."""
        n = 1
        for p, e in self.factors:
            n *= p**e
        return n

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def occurrences(self) -> tuple[int, ...]:
        """Primes repeated with multiplicity, ascending: 12 -> (2, 2, 3)."""
        out: list[int] = []
        for p, e in self.factors:
            out.extend([p] * e)
        return tuple(out)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> Factorization:
    """Completely factor n >= 1; every factor is certified prime.

    Raises FactorizationOverflow for n > 2**96 and InvalidInput for n < 1.
    Results are cached (the function is pure and sweeps refactor the same
    integers constantly).
    """
    if n < 1:
        raise InvalidInput(f"factorize expects n >= 1, got {n}")
    if n > FACTORIZE_BOUND:
        raise FactorizationOverflow(f"{n} exceeds the supported bound 2**96")
    counts: dict[int, int] = {}
    for p in _sieve_small_primes():
        if p * p > n:
            break
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m < _TRIAL_BOUND * _TRIAL_BOUND or is_prime(m):
                counts[m] = counts.get(m, 0) + 1
                continue
            d = _pollard_rho(m)
            stack.append(d)
            stack.append(m // d)
    return Factorization(tuple(sorted(counts.items())))


def nu(p: int, x: Fraction | int) -> int:
    """p-adic valuation of a nonzero rational: nu(num) - nu(den)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    x = Fraction(x)
    if x == 0:
        raise InvalidInput("valuation of 0 is undefined")
    v = 0
    num = abs(x.numerator)
    while num % p == 0:
        num //= p
        v += 1
    den = x.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def divides_rational(d: int, r: Fraction | int) -> str:
    """Which side of the reduced fraction r does d divide?

    Returns "numerator", "denominator" or "no".  With r = m/n in lowest
    terms the sides are coprime, so at most one of them is divisible.
    """
    if d < 2:
        raise InvalidInput(f"divisor must be >= 2, got {d}")
    r = Fraction(r)
    if r == 0:
        raise InvalidInput("0 has no divisibility convention")
    if abs(r.numerator) % d == 0:
        return "numerator"
    if r.denominator % d == 0:
        return "denominator"
    return "no"


def gcd_chain(m: int, r: list[int] | tuple[int, ...]) -> list[int]:
    """Split m into per-term gcd factors against the sequence r.

    Produces (m_1, ..., m_N) with m_1 = gcd(r_1, m) and
    m_n = gcd(r_n, m / (m_1 ... m_{n-1})); the output multiplies back to m
    and m_n divides r_n termwise.  Requires m >= 1 and m | prod(r); the
    output keeps trailing 1s so it aligns index-by-index with r.
    """
    if m < 1:
        raise InvalidInput(f"gcd_chain expects m >= 1, got {m}")
    prod = 1
    for x in r:
        if x < 1:
            raise InvalidInput("gcd_chain terms must be positive integers")
        prod *= x
    if prod % m != 0:
        raise DivisibilityViolation(f"{m} does not divide the product {prod}")
    out: list[int] = []
    rem = m
    for x in r:
        g = math.gcd(x, rem)
        out.append(g)
        rem //= g
    # rem == 1 is guaranteed by the divisibility precondition.
    return out


_RATIONAL_RE = re.compile(r"^-?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse `[-]num/den` or `[-]num` (no other formats) into a Fraction."""
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise InvalidInput(f"cannot parse rational {text!r} (expected [-]num[/den])")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise InvalidInput(f"zero denominator in {text!r}") from None


def format_rational(q: Fraction) -> str:
    """Inverse of parse_rational: `[-]num/den`, or `[-]num` for integers."""
    return str(q)
