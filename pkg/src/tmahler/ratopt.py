"""Exact t-metric Mahler measure of a rational number with an optimal
witness decomposition.

The infimum over all factorizations of a nonzero rational q = m/m' (reduced)
is attained inside the canonical divisor space: multisets of pairs (u, v)
where the u multiply to m and the v multiply to m'.  The optimizer searches
that space as two multiset partitions of the prime occurrences of m and m'
plus a pairing of blocks; for fixed partitions, pairing largest block with
largest block is optimal (termwise dominance of max under sorted pairing for
any increasing cost).  A brute-force oracle with no pruning and every
pairing double-checks the optimizer at small scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import factorize, gcd_chain
from .errors import DivisibilityViolation, InvalidInput, InvalidT, TooLarge
from .measure import mahler_rational

INF = math.inf

# Cost differences at or below this are ties, broken by witness shape.
TIE_EPS = 1e-12


def check_t(t: float) -> float:
    """Validate an exponent t in [1, inf]."""
    t = float(t)
    if math.isnan(t) or t < 1:
        raise InvalidT(f"t must be >= 1 or inf, got {t}")
    return t


def parse_t(text: str) -> float:
    """Parse a t value: a decimal >= 1, or the literal `inf`."""
    text = text.strip().lower()
    if text in ("inf", "infinity"):
        return INF
    try:
        t = float(text)
    except ValueError:
        raise InvalidT(f"cannot parse t value {text!r}") from None
    return check_t(t)


def tnorm(measures: Sequence[float], t: float) -> float:
    """L_t norm of a vector of nonnegative measures; max for t = inf."""
    t = check_t(t)
    if any(m < 0 for m in measures):
        raise InvalidInput("measures must be nonnegative")
    if not measures:
        return 0.0
    if t == INF:
        return max(measures)
    if t == 1:
        return sum(measures)
    return sum(m**t for m in measures) ** (1 / t)


@dataclass(frozen=True)
class RationalDecomposition:
    """A factorization q = f_1 * ... * f_N with per-factor Mahler measures
    and the t-norm of the measure vector.  Unit factors are stripped; the
    empty decomposition (q = +/-1) has cost 0."""

    factors: tuple[Fraction, ...]
    measures: tuple[float, ...]
    total_cost: float

    def product(self) -> Fraction:
        prod = Fraction(1)
        for f in self.factors:
            prod *= f
        return prod


def _make_decomposition(q: Fraction, factors: Iterable[Fraction], t: float) -> RationalDecomposition:
    """Assemble the witness: strip units, sort ascending, carry q's sign on
    the largest factor (measures ignore sign, so the cost is unchanged)."""
    kept = sorted(f for f in factors if f != 1)
    if q < 0 and kept:
        kept[-1] = -kept[-1]
    measures = tuple(mahler_rational(f) for f in kept)
    return RationalDecomposition(tuple(kept), measures, tnorm(measures, t))


# --- multiset partitions of prime occurrences ------------------------------

_PARTITION_CACHE: dict[tuple[int, ...], tuple[tuple[int, ...], ...]] = {}
_BOUNDED_CACHE: dict[tuple, tuple] = {}


def _submultisets(occ: tuple[int, ...]):
    """Yield (sub, remainder) for every distinct sub-multiset of occ, both
    as descending tuples."""
    distinct: list[tuple[int, int]] = []
    for p in occ:
        if distinct and distinct[-1][0] == p:
            distinct[-1] = (p, distinct[-1][1] + 1)
        else:
            distinct.append((p, 1))

    def rec(i: int, taken: list[int]):
        if i == len(distinct):
            counts = dict(zip((p for p, _ in distinct), taken))
            sub: list[int] = []
            rest: list[int] = []
            for p, c in distinct:
                k = counts[p]
                sub.extend([p] * k)
                rest.extend([p] * (c - k))
            yield tuple(sub), tuple(rest)
            return
        _, c = distinct[i]
        for k in range(c + 1):
            taken.append(k)
            yield from rec(i + 1, taken)
            taken.pop()

    yield from rec(0, [])


def _bounded_partitions(occ: tuple[int, ...], bound: tuple[int, ...] | None):
    """Partitions of occ (descending tuple) into blocks, listed with blocks
    in non-increasing lexicographic order, every block <= bound.

    Canonical and duplicate-free: the first block is the lexicographically
    largest one, which always contains the leading occurrence; later blocks
    are capped by it, so each partition has exactly one generation path.
    """
    if not occ:
        return ((),)
    key = (occ, bound)
    cached = _BOUNDED_CACHE.get(key)
    if cached is not None:
        return cached
    head, rest = occ[0], occ[1:]
    out = []
    for sub, remainder in _submultisets(rest):
        block = (head,) + sub
        if bound is not None and block > bound:
            continue
        for tail in _bounded_partitions(remainder, block):
            out.append((block,) + tail)
    result = tuple(out)
    _BOUNDED_CACHE[key] = result
    return result


def block_partitions(occ: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """All partitions of a prime-occurrence multiset into unordered blocks,
    each partition given as the descending tuple of block products."""
    occ = tuple(sorted(occ, reverse=True))
    cached = _PARTITION_CACHE.get(occ)
    if cached is not None:
        return cached
    result = tuple(
        tuple(sorted((math.prod(b) for b in part), reverse=True))
        for part in _bounded_partitions(occ, None)
    )
    _PARTITION_CACHE[occ] = result
    return result


def _paired_blocks(u: Sequence[int], v: Sequence[int]) -> list[tuple[int, int]]:
    """Sorted pairing: both block lists descending, padded with 1s."""
    n = max(len(u), len(v))
    uu = sorted(u, reverse=True) + [1] * (n - len(u))
    vv = sorted(v, reverse=True) + [1] * (n - len(v))
    return list(zip(uu, vv))


def metric_mahler_rational(q: Fraction | int, t: float) -> tuple[float, RationalDecomposition]:
    """Exact infimum M_t(q) over all factorizations, with an attaining
    rational witness.

    Strategy: two admissible facts close most cases immediately --
    every decomposition costs at least the per-occurrence bound
    max(sum_num (log p)^t, sum_den (log p)^t) (superadditivity of x^t), and
    at least log(largest prime) at t = inf.  When the single-factor witness
    or the fully split sorted pairing meets the bound, it is optimal.
    Otherwise both partition lattices are scanned cheapest-first with the
    same bound used to cut the scan off.
    """
    t = check_t(t)
    q = Fraction(q)
    if q == 0:
        raise InvalidInput("M_t(0) is undefined")
    m, mp = abs(q.numerator), q.denominator
    occ_n = tuple(sorted(factorize(m).occurrences(), reverse=True))
    occ_d = tuple(sorted(factorize(mp).occurrences(), reverse=True))
    if not occ_n and not occ_d:
        return 0.0, RationalDecomposition((), (), 0.0)

    if t == INF:
        # The largest prime occurrence is a lower bound (it must divide some
        # block), and the full split meets it.
        pairs = _paired_blocks(occ_n, occ_d)
        value = max(math.log(max(u, v)) for u, v in pairs)
        return value, _make_decomposition(q, (Fraction(u, v) for u, v in pairs), t)

    fcache: dict[int, float] = {}

    def f(x: int) -> float:
        r = fcache.get(x)
        if r is None:
            r = math.log(x) ** t
            fcache[x] = r
        return r

    lower = max(sum(f(p) for p in occ_n), sum(f(p) for p in occ_d))
    close_eps = 1e-11 * max(1.0, lower)

    candidates = [
        [(m, mp)],                        # the number itself
        _paired_blocks(occ_n, occ_d),     # fully split occurrences
    ]

    best_cost = INF
    best_key: tuple | None = None
    best_pairs: list[tuple[int, int]] | None = None

    def consider(pairs: list[tuple[int, int]]) -> None:
        nonlocal best_cost, best_key, best_pairs
        cost = sum(f(max(u, v)) for u, v in pairs)
        if cost > best_cost + TIE_EPS:
            return
        factors = sorted(Fraction(u, v) for u, v in pairs if u != v)
        key = (len(factors), tuple(factors))
        if cost < best_cost - TIE_EPS:
            best_cost, best_key, best_pairs = cost, key, pairs
        elif key < best_key:  # tie: fewest factors, then smallest factor list
            best_cost = min(best_cost, cost)
            best_key, best_pairs = key, pairs

    for cand in candidates:
        consider(cand)

    if best_cost > lower + close_eps:
        # Scan both partition lattices cheapest-first; sum f(block) is an
        # admissible bound for any pairing of that partition, so the scans
        # cut off as soon as they pass the incumbent.
        parts_n = sorted((sum(f(x) for x in u), u) for u in block_partitions(occ_n))
        parts_d = sorted((sum(f(x) for x in v), v) for v in block_partitions(occ_d))
        for su, u_blocks in parts_n:
            if su > best_cost + TIE_EPS:
                break
            for sv, v_blocks in parts_d:
                if sv > best_cost + TIE_EPS:
                    break
                consider(_paired_blocks(u_blocks, v_blocks))

    assert best_pairs is not None
    witness = _make_decomposition(q, (Fraction(u, v) for u, v in best_pairs), t)
    return best_cost ** (1 / t), witness


def metric_mahler_rational_oracle(
    q: Fraction | int,
    t: float,
    max_omega: int = 10,
    extraneous_primes: Sequence[int] = (),
) -> float:
    """Brute-force reference value for M_t(q): enumerate every multiset
    partition of the numerator and denominator prime occurrences and every
    pairing of blocks (not only the sorted one), no pruning.

    Enumeration is delegated to sympy's Knuth-style multiset iterators so
    this path shares no code with the optimizer.  ``extraneous_primes``
    optionally injects cancelling p/p occurrence pairs to confirm that
    primes outside the support never lower the cost.
    """
    t = check_t(t)
    q = Fraction(q)
    if q == 0:
        raise InvalidInput("M_t(0) is undefined")
    occ_n = list(factorize(abs(q.numerator)).occurrences())
    occ_d = list(factorize(q.denominator).occurrences())
    if len(occ_n) + len(occ_d) > max_omega:
        raise TooLarge(
            f"oracle limited to {max_omega} prime occurrences, "
            f"got {len(occ_n) + len(occ_d)}"
        )
    occ_n += list(extraneous_primes)
    occ_d += list(extraneous_primes)

    from sympy.utilities.iterables import multiset_partitions, multiset_permutations

    def partition_products(occ: list[int]) -> list[list[int]]:
        if not occ:
            return [[]]
        return [[math.prod(b) for b in part] for part in multiset_partitions(occ)]

    def cost(us: Sequence[int], vs: Sequence[int]) -> float:
        total, top = 0.0, 0.0
        for u, v in zip(us, vs):
            g = math.gcd(u, v)
            w = max(u // g, v // g)
            if w == 1:
                continue
            total += math.log(w) ** t if t != INF else 0.0
            top = max(top, math.log(w))
        return top if t == INF else total

    best = INF
    for us in partition_products(occ_n):
        for vs in partition_products(occ_d):
            n = max(len(us), len(vs))
            upad = us + [1] * (n - len(us))
            vpad = sorted(vs + [1] * (n - len(vs)))
            perms = multiset_permutations(vpad) if vpad else [[]]
            for perm in perms:
                best = min(best, cost(upad, perm))
    return best if t == INF else best ** (1 / t) if best > 0 else 0.0


def reduce_to_rational_decomposition(
    q: Fraction | int, norms: Sequence[Fraction | int], t: float
) -> RationalDecomposition:
    """Convert a factor-norm sequence into a rational decomposition of q of
    no greater cost.

    Each norm is the signed reduced rational +/- r_n/s_n of one factor in
    some factorization of q; they must multiply to +/-q.  Two gcd chains
    (numerator of q against the r_n, denominator against the s_n) produce
    divisor pairs m_n/m'_n with m_n <= r_n and m'_n <= s_n termwise, so each
    new factor's measure is at most log max(r_n, s_n).
    """
    t = check_t(t)
    q = Fraction(q)
    if q == 0:
        raise InvalidInput("cannot decompose 0")
    norms = [Fraction(x) for x in norms]
    if any(x == 0 for x in norms):
        raise InvalidInput("norms must be nonzero")
    prod = Fraction(1)
    for x in norms:
        prod *= x
    if abs(prod) != abs(q):
        raise DivisibilityViolation(
            f"norm product {prod} does not match the target {q} up to sign"
        )
    m, mp = abs(q.numerator), q.denominator
    rs = [abs(x.numerator) for x in norms]
    ss = [x.denominator for x in norms]
    num_chain = gcd_chain(m, rs)
    den_chain = gcd_chain(mp, ss)
    factors = [Fraction(a, b) for a, b in zip(num_chain, den_chain)]
    return _make_decomposition(q, factors, t)


def mt_curve(q: Fraction | int, t_grid: Sequence[float]) -> list[tuple[float, float]]:
    """Evaluate t -> M_t(q) on a grid (non-increasing in t)."""
    return [(t, metric_mahler_rational(q, t)[0]) for t in map(check_t, t_grid)]
