"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test prints a single PASS/FAIL line (run pytest with -s to see them
mid-run; they also land in captured output).  The randomized criteria use
fixed seeds so the suite is reproducible.
"""

import contextlib
import io
import json
import math
import random
import time
from fractions import Fraction

from tmahler.arith import factorize
from tmahler.cli import run
from tmahler.measure import (
    QuadraticNumber,
    STABLE_INSIDE,
    STABLE_ON_CIRCLE,
    STABLE_OUTSIDE,
    UNSTABLE,
    Surd,
    is_stable_quadratic,
    mahler,
    mahler_quadratic,
    mahler_rational,
    norm_surd,
)
from tmahler.quadfield import (
    attainment_in_quadratic_field,
    certify_non_attainment,
    validate_attaining_decomposition,
)
from tmahler.ratopt import INF, metric_mahler_rational, metric_mahler_rational_oracle

LOG = math.log
TOL = 1e-9


def _report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def _squarefree_with_largest_prime(limit):
    """(D, largest prime factor) for every squarefree D <= limit."""
    spf = list(range(limit + 1))
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == i:
            for j in range(i * i, limit + 1, i):
                if spf[j] == j:
                    spf[j] = i
    out = []
    for d in range(2, limit + 1):
        x, biggest, squarefree = d, 1, True
        while x > 1:
            p = spf[x]
            x //= p
            if x % p == 0:
                squarefree = False
                break
            biggest = max(biggest, p)
        if squarefree:
            out.append((d, biggest))
    return out


def test_criterion_1_sqrt30_closed_form_and_runtime():
    """mt-surd 30 2 reproduces the power-sum closed form, fast."""
    start = time.perf_counter()
    worst = 0.0
    for t in (1.0, 1.5, 2.0, 3.0):
        with contextlib.redirect_stdout(io.StringIO()) as buf:
            code = run(["mt-surd", "30", "2", "--t", f"{t:g}"])
        assert code == 0
        value = json.loads(buf.getvalue())["result"]["value"]
        expected = (LOG(5) ** t + LOG(3) ** t + LOG(2) ** t) ** (1 / t)
        worst = max(worst, abs(value - expected))
    with contextlib.redirect_stdout(io.StringIO()) as buf:
        code = run(["mt-surd", "30", "2", "--t", "inf"])
    assert code == 0
    worst = max(worst, abs(json.loads(buf.getvalue())["result"]["value"] - LOG(5)))
    elapsed = time.perf_counter() - start
    _report(
        "criterion 1: D=30 closed form for t in {1,1.5,2,3,inf}",
        worst <= TOL and elapsed < 0.1 * 5,
        f"worst diff {worst:.2e}, {elapsed*1000:.1f} ms for 5 runs",
    )


def test_criterion_2_sqrt42_dual_witnesses():
    """Both attaining sets for sqrt(42) validate and cost the same."""
    alt = [Surd(Fraction(7, 6), 2), Fraction(3), Fraction(2)]
    std = [Surd(Fraction(p), 2) for p in (7, 3, 2)]
    worst = 0.0
    ok = True
    for t in (1.5, 2.0, INF):
        ra = validate_attaining_decomposition(42, 2, t, alt)
        rs = validate_attaining_decomposition(42, 2, t, std)
        ok &= ra.valid and rs.valid
        worst = max(worst, abs(ra.value - rs.value))
    _report(
        "criterion 2: D=42 dual witnesses agree for t in {1.5,2,inf}",
        ok and worst <= TOL,
        f"worst cost gap {worst:.2e}",
    )


def test_criterion_3_sqrt21_example():
    """The sqrt(21) quadratic-factor identity: measures and validity."""
    q1 = QuadraticNumber(1, -7, 7, 1)    # (7+sqrt21)/2
    q2 = QuadraticNumber(1, -3, -3, -1)  # (3-sqrt21)/2
    a_ok = abs(mahler_quadratic(q1) - LOG(7)) <= 1e-12
    m2 = mahler_quadratic(q2)
    b_ok = LOG(3) < m2 < LOG(7)
    dec = [Fraction(-1), q1, q2]
    rinf = validate_attaining_decomposition(21, 2, INF, dec)
    c_ok = rinf.valid and abs(rinf.value - LOG(7)) <= TOL
    r2 = validate_attaining_decomposition(21, 2, 2.0, dec)
    c_ok &= not r2.valid
    _report(
        "criterion 3: D=21 measures, inf-validity, finite-t rejection",
        a_ok and b_ok and c_ok,
        f"M((3-sqrt21)/2)={m2:.6f} in (log3, log7)",
    )


def test_criterion_4_oracle_equivalence_full():
    """Optimizer equals the exhaustive oracle for every reduced m/m' with
    m*m' <= 5000 and t in {1, 1.5, 2, 3, inf}."""
    start = time.perf_counter()
    ts = (1.0, 1.5, 2.0, 3.0, INF)
    worst, instances = 0.0, 0
    for n in range(1, 5001):
        prime_powers = [p**e for p, e in factorize(n).factors]
        k = len(prime_powers)
        for mask in range(1 << k):
            m = 1
            for i in range(k):
                if mask >> i & 1:
                    m *= prime_powers[i]
            q = Fraction(m, n // m)
            instances += 1
            for t in ts:
                got = metric_mahler_rational(q, t)[0]
                want = metric_mahler_rational_oracle(q, t, max_omega=12)
                worst = max(worst, abs(got - want))
                assert worst <= TOL, (q, t, worst)
    elapsed = time.perf_counter() - start
    _report(
        "criterion 4: oracle equivalence on all m*m' <= 5000, 5 t values",
        worst <= TOL and elapsed < 300,
        f"{instances} instances x 5, worst diff {worst:.2e}, {elapsed:.1f} s",
    )


def test_criterion_5_attainment_sweep():
    """attained iff D < p1^2 for every squarefree D <= 1e4; empty
    certificates in the non-attained regime."""
    start = time.perf_counter()
    pairs = _squarefree_with_largest_prime(10**4)
    checked = 0
    for d, p1 in pairs:
        rep = attainment_in_quadratic_field(d, 2.0)
        assert rep.attained == (d < p1 * p1), d
        if not rep.attained:
            cert = certify_non_attainment(d, 2.0)
            assert cert.empty, d
        checked += 1
    elapsed = time.perf_counter() - start
    _report(
        "criterion 5: attainment dichotomy on squarefree D <= 1e4",
        checked == len(pairs) and elapsed < 60,
        f"{checked} values, {elapsed:.1f} s",
    )


def test_criterion_6_collapse_laws():
    """M_1 and M_inf closed forms on 1e4 random rationals, parts <= 1e9."""
    start = time.perf_counter()
    rng = random.Random(0xC0FFEE)
    worst = 0.0
    for _ in range(10**4):
        q = Fraction(rng.randrange(1, 10**9), rng.randrange(1, 10**9))
        m, mp = q.numerator, q.denominator
        v1 = metric_mahler_rational(q, 1.0)[0]
        worst = max(worst, abs(v1 - LOG(max(m, mp))))
        vinf = metric_mahler_rational(q, INF)[0]
        if m == mp == 1:
            worst = max(worst, abs(vinf))
        else:
            biggest = max(factorize(m * mp).primes())
            worst = max(worst, abs(vinf - LOG(biggest)))
        assert worst <= TOL, q
    elapsed = time.perf_counter() - start
    _report(
        "criterion 6: collapse laws on 1e4 random rationals",
        worst <= TOL,
        f"worst diff {worst:.2e}, {elapsed:.1f} s",
    )


def _random_smooth_rational(rng, primes=(2, 3, 5, 7, 11, 13), max_occurrences=4):
    num = den = 1
    for _ in range(rng.randrange(0, max_occurrences + 1)):
        num *= rng.choice(primes)
    for _ in range(rng.randrange(0, max_occurrences + 1)):
        den *= rng.choice(primes)
    return Fraction(num, den)


def test_criterion_7_property_suite():
    """Triangle inequality, inversion symmetry, monotonicity in t, and the
    surd norm-conversion identity: 1e4 randomized trials each."""
    start = time.perf_counter()
    trials = 10**4

    rng = random.Random(1)
    for _ in range(trials):
        q1 = _random_smooth_rational(rng)
        q2 = _random_smooth_rational(rng)
        t = rng.choice([1.0, 1.5, 2.0, 3.0, INF])
        v12 = metric_mahler_rational(q1 * q2, t)[0]
        v1 = metric_mahler_rational(q1, t)[0]
        v2 = metric_mahler_rational(q2, t)[0]
        if t == INF:
            assert v12 <= max(v1, v2) + TOL, (q1, q2)
        else:
            assert v12**t <= v1**t + v2**t + TOL, (q1, q2, t)
    _report("criterion 7a: triangle inequality, 1e4 trials", True)

    rng = random.Random(2)
    for _ in range(trials):
        q = _random_smooth_rational(rng)
        if q == 1:
            continue
        t = rng.choice([1.0, 1.5, 2.0, 3.0, INF])
        d = abs(metric_mahler_rational(q, t)[0] - metric_mahler_rational(1 / q, t)[0])
        assert d <= TOL, (q, t)
    _report("criterion 7b: inversion symmetry, 1e4 trials", True)

    rng = random.Random(3)
    for _ in range(trials):
        q = _random_smooth_rational(rng)
        t1 = rng.uniform(1, 4)
        t2 = rng.uniform(t1, 5)
        hi = metric_mahler_rational(q, t1)[0]
        lo = metric_mahler_rational(q, t2)[0]
        assert hi >= lo - TOL, (q, t1, t2)
        assert hi >= metric_mahler_rational(q, INF)[0] - TOL
    _report("criterion 7c: monotonicity in t, 1e4 trials", True)

    rng = random.Random(4)
    for _ in range(trials):
        base = Fraction(rng.randrange(1, 10**4), rng.randrange(1, 10**4))
        s = Surd(base, rng.randrange(1, 8))
        d = abs(mahler(s) - mahler_rational(norm_surd(s))) if base != 1 else 0.0
        assert d <= TOL, s
    _report(
        "criterion 7d: surd norm-conversion identity, 1e4 trials",
        True,
        f"suite took {time.perf_counter() - start:.1f} s",
    )


def test_criterion_8_stability_classifier():
    """Exact coefficient test vs direct numeric root moduli: 1e5 random
    irreducible quadratics with |coefficients| <= 1e3, zero disagreements."""
    start = time.perf_counter()
    rng = random.Random(5)
    disagreements = 0
    checked = 0
    while checked < 10**5:
        a = rng.randrange(1, 1001)
        b = rng.randrange(-1000, 1001)
        c = rng.randrange(-1000, 1001)
        if c == 0:
            continue
        if math.gcd(math.gcd(a, abs(b)), abs(c)) != 1:
            continue
        d = b * b - 4 * a * c
        if d >= 0 and math.isqrt(d) ** 2 == d:
            continue  # reducible
        checked += 1
        q = QuadraticNumber(a, b, c)
        if d < 0:
            moduli = [math.sqrt(c / a)] * 2
        else:
            s = math.sqrt(d)
            moduli = [abs((-b + s) / (2 * a)), abs((-b - s) / (2 * a))]
        if all(m > 1 for m in moduli):
            numeric = STABLE_OUTSIDE
        elif all(m < 1 for m in moduli):
            numeric = STABLE_INSIDE
        elif all(m == 1 for m in moduli):
            numeric = STABLE_ON_CIRCLE
        else:
            numeric = UNSTABLE
        if is_stable_quadratic(q) != numeric:
            disagreements += 1
    elapsed = time.perf_counter() - start
    _report(
        "criterion 8: stability classifier vs numeric roots, 1e5 triples",
        disagreements == 0,
        f"0 disagreements expected, got {disagreements}; {elapsed:.1f} s",
    )
