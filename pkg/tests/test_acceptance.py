"""Acceptance criteria, each at its stated tolerance and time budget.

A summary line per criterion is printed at the end of the pytest run.
"""

import logging
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction as F

import pytest

from hgdensity.digits import QuadraticDigitStream, rational_expansion
from hgdensity.numtheory import cyclic_orbit, euler_phi, is_integer, primes_up_to, valuation
from hgdensity.params import HypergeomParams, QuadraticHGParams
from hgdensity.quadratic_density import HALF, bk_set
from hgdensity.rational_density import bounded_class_set, max_condition_bounded_set, orbit_values, unbounded_witness
from hgdensity.schwarz_search import SearchConfig, SearchRecord, bound_audit, d_ac, sweep
from hgdensity.valuation import (
    carry_count,
    coefficient_valuation,
    coefficients,
    exact_valuation_oracle,
    valuation_profile,
)
from hgdensity.verify import INCONCLUSIVE, INTEGRAL, WITNESSED, verify_quadratic

from reference_data import ORBIT_LISTS, HALF_DENSITY_FIELDS, EX_ALPHA, EX_BETA, large_density_pairs_up_to

SERIES_3F2 = HypergeomParams.of(EX_ALPHA, EX_BETA)


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.1f}s, budget {seconds}s"


@pytest.mark.criterion(1, "orbit values {-p^j x} match the 20 reference lists")
def test_orbit_value_lists():
    with budget(1):
        for cls in (1, 3, 7, 9):
            p = next(q for q in primes_up_to(100) if q % 10 == cls and q > 10)
            alpha, beta = orbit_values(SERIES_3F2, p, 4)
            assert alpha + beta == ORBIT_LISTS[cls]


@pytest.mark.criterion(2, "bounded classes {1} mod 10, density 1/4 for the 3F2 example")
def test_example_density():
    with budget(1):
        rep = bounded_class_set(SERIES_3F2)
        assert rep.modulus == 10 and rep.bounded_classes == (1,) and rep.density == F(1, 4)


@pytest.mark.criterion(3, "carry counts equal nu_p of the exact binomial (Kummer)")
def test_kummer():
    checks = 0
    with budget(30):
        for v in range(1, 11):
            for u in range(1, v):
                if math.gcd(u, v) != 1:
                    continue
                x = F(-u, v)
                for p in primes_up_to(23):
                    if v % p == 0:
                        continue
                    e = rational_expansion(x, p)
                    binom = F(1)
                    for k in range(301):
                        if k:
                            binom = binom * (x + k) / k
                        assert carry_count(e, k) == valuation(binom, p), (x, p, k)
                        checks += 1
    assert checks > 70_000


def _random_rational_params(rng):
    m = rng.randint(2, 4)
    pick = lambda: F(rng.randint(1, 11 * 4), rng.randint(1, 12)) - rng.randint(0, 2)
    while True:
        alpha = [pick() for _ in range(m)]
        beta = [pick() for _ in range(m - 1)]
        if all(not (is_integer(x) and x <= 0) for x in alpha + beta):
            prm = HypergeomParams.of(alpha, beta)
            if prm.m == m:
                return prm


def _random_quadratic_params(rng):
    while True:
        D = rng.choice([-1, -2, -3, -5, -7, 2, 3, 5, 6, 7, -11, 13])
        a = F(rng.randint(-24, 24), rng.randint(1, 12))
        c = F(rng.randint(1, 36), rng.randint(1, 12))
        b = F(rng.choice([1, -1, 2, 3]), rng.choice([1, 2, 3]))
        if not (is_integer(c) and c <= 0):
            return QuadraticHGParams(a, b, c, D)


@pytest.mark.criterion(4, "carry formula equals the exact oracle on random rational and quadratic series")
def test_valuation_formula():
    rng = random.Random(20261014)
    primes = primes_up_to(50)
    instances = 0
    with budget(60):
        for _ in range(50):
            prm = _random_rational_params(rng)
            exact = list(coefficients(prm, 301))
            good = [p for p in primes if prm.is_good_prime(p)]
            assert good
            for p in good:
                for k, a in enumerate(exact):
                    assert coefficient_valuation(prm, p, k) == valuation(a, p), (prm, p, k)
                    instances += 1
                for k in rng.sample(range(301), 3):
                    assert exact_valuation_oracle(prm, p, k) == valuation(exact[k], p)
        quad = 0
        while quad < 10:
            q = _random_quadratic_params(rng)
            good = [p for p in primes if q.splitting(p) == 1 and q.is_good_prime(p)]
            if not good:
                continue
            quad += 1
            exact = list(coefficients(q, 301))
            for p in good:
                for k, a in enumerate(exact):
                    assert coefficient_valuation(q, p, k) == valuation(a, p), (q, p, k)
                    instances += 1
    assert instances > 10_000


@pytest.mark.criterion(5, "2F1 specialization equals the max-condition bounded set")
def test_max_condition_cross_check():
    rng = random.Random(55)
    with budget(10):
        for _ in range(20):
            a, b, c = (F(rng.randint(1, d - 1), d) for d in (rng.randint(2, 12) for _ in range(3)))
            N, expected = max_condition_bounded_set(a, b, c)
            rep = bounded_class_set(HypergeomParams.of([a, b], [c]))
            if rep.params.m < 2:
                # c cancelled a numerator parameter: binomial series, everything bounded
                assert rep.density == 1 and len(expected) == euler_phi(N)
                continue
            assert rep.modulus == N and set(rep.bounded_classes) == set(expected), (a, b, c)
            assert rep.density == F(len(expected), euler_phi(N))


@pytest.mark.criterion(6, "sweep at height 24 matches the reference pairs of height <= 24")
def test_large_density_pairs_height24():
    with budget(120):
        records = sweep(SearchConfig(24))
    got = {(r.a, r.c): r.d_ac for r in records if not is_integer(2 * r.a)}
    assert got == large_density_pairs_up_to(24)
    assert set(got.values()) == {F(1, 2), F(3, 8), F(1, 3)}


@pytest.mark.criterion(7, "every half-density pair of height <= 24 has an imaginary field attaining 1/2")
def test_half_density_fields_height24(caplog):
    with budget(120), caplog.at_level(logging.WARNING):
        records = sweep(SearchConfig(24))
    half = [r for r in records if r.d_ac == HALF]
    assert len(half) == 71
    for r in half:
        fields = r.half_fields
        assert fields, (r.a, r.c)
        assert all(D < 0 for D in fields), (r.a, r.c, fields)
        if (r.a, r.c) in HALF_DENSITY_FIELDS:
            assert HALF_DENSITY_FIELDS[(r.a, r.c)] in fields
    # uniqueness is reported, not required
    multi = [r for r in half if len(r.half_fields) > 1]
    assert len([m for m in caplog.messages if "several half-density fields" in m]) == len(multi)


@pytest.mark.criterion(8, "witnesses with A = 3 reach nu_p <= -4 at p = 13, 17, 19 (exact oracle)")
def test_rational_witnesses():
    with budget(30):
        for p in (13, 17, 19):
            w = unbounded_witness(SERIES_3F2, p, 3)
            assert exact_valuation_oracle(SERIES_3F2, p, w.k) <= -4


@pytest.mark.criterion(9, "the 3F2 example is p-integral up to k = 2000 at p = 11, 31, 41")
def test_rational_integrality():
    with budget(30):
        for p in (11, 31, 41):
            prof = valuation_profile(SERIES_3F2, p, 2001)
            assert min(prof) >= 0
            assert all(coefficient_valuation(SERIES_3F2, p, k) == prof[k] for k in range(0, 2001, 7))


@pytest.mark.criterion(10, "quadratic (1/3, 1, 5/6, -3): bounded split primes integral, others witnessed")
def test_quadratic_consistency():
    q = QuadraticHGParams(F(1, 3), 1, F(5, 6), -3)
    with budget(120):
        rows = verify_quadratic(q, primes_up_to(200), k_limit=2000, r=2, scan_limit=1000)
    rep = bk_set(q)
    split = [p for p in primes_up_to(200) if p > 3 and q.splitting(p) == 1]
    assert [r.p for r in rows] == split
    inside = [r for r in rows if rep.predicts_bounded(r.p)]
    outside = [r for r in rows if not rep.predicts_bounded(r.p)]
    assert inside and all(r.status == INTEGRAL for r in inside)
    assert all(r.status in (WITNESSED, INCONCLUSIVE) for r in outside)
    witnessed = sum(r.status == WITNESSED for r in outside)
    assert 2 * witnessed >= len(outside)
    # B_K = {1 mod 6} holds every split prime here, so the outside half is empty
    assert rep.bounded_classes == (1,) and not outside


def _digit_sum_pairs(rng, n):
    """Pairs (x, y, x + y) of digit sources with independently computed sum digits."""
    out = []
    while len(out) < n:
        p = rng.choice(primes_up_to(40)[1:])
        if rng.random() < 0.5:
            dens = [q for q in range(1, 13) if q % p]
            x = F(rng.randint(-40, 40), rng.choice(dens))
            y = F(rng.randint(-40, 40), rng.choice(dens))
            out.append((rational_expansion(x, p), rational_expansion(y, p), rational_expansion(x + y, p)))
            continue
        d = rng.choice([2, -1, -2, -3, 3, 5, -7, 7])
        if d % p == 0 or pow(d % p, (p - 1) // 2, p) != 1:
            continue
        a1, a2 = (F(rng.randint(-12, 12), rng.choice([1, 2, 3, 4])) for _ in range(2))
        b1, b2 = (F(rng.choice([1, 2, -1, 3]), rng.choice([1, 2])) for _ in range(2))
        if p in (2, 3) or b1 + b2 == 0:
            continue
        # digits of a + b sqrt(d) - 1, so the sum is (a1 + a2 - 1) + (b1 + b2) sqrt(d) - 1
        out.append((QuadraticDigitStream(a1, b1, F(d), p), QuadraticDigitStream(a2, b2, F(d), p),
                    QuadraticDigitStream(a1 + a2 - 1, b1 + b2, F(d), p)))
    return out


@pytest.mark.criterion(11, "structural invariants: closure, 1/2 and 1/4 bounds, digit sums, b-independence")
def test_structural_invariants(records24):
    rng = random.Random(11)
    # subgroup closure of B
    for _ in range(30):
        prm = _random_rational_params(rng)
        rep = bounded_class_set(prm)
        B = set(rep.bounded_classes)
        assert all(set(cyclic_orbit(u, rep.modulus)) <= B for u in B)
    # subgroup closure of B_K and the split upper bound 1/2
    for _ in range(30):
        q = _random_quadratic_params(rng)
        rep = bk_set(q)
        B = set(rep.bounded_classes)
        assert rep.density <= HALF
        assert all(set(cyclic_orbit(u, rep.modulus)) <= B for u in B)
    # D(a; c) <= 1/2 and D_K <= 1/4 for coprime fields, on the sweep and on random pairs
    for r in records24:
        bound_audit(r)
    for _ in range(100):
        a, c = (F(rng.randint(1, d - 1), d) for d in (rng.randint(2, 30), rng.randint(2, 30)))
        if is_integer(2 * a) and is_integer(2 * c):
            continue
        bound_audit(SearchRecord(a, c, d_ac(a, c)))
    # digit sums: x[j] + y[j] >= (x + y)[j] - 1
    for x, y, s in _digit_sum_pairs(rng, 100):
        for j in range(60):
            assert x.digit(j) + y.digit(j) >= s.digit(j) - 1
    # b never enters the bounded set
    for _ in range(20):
        q = _random_quadratic_params(rng)
        other = QuadraticHGParams(q.a, q.b * rng.choice([2, -3, F(1, 5)]), q.c, q.D)
        r1, r2 = bk_set(q), bk_set(other)
        assert (r1.modulus, r1.bounded_classes, r1.density) == (r2.modulus, r2.bounded_classes, r2.density)


@pytest.mark.extended
@pytest.mark.criterion("6/7 extended", "sweep at height 48 matches every reference pair and field")
def test_height48_full_sweep():
    records = sweep(SearchConfig(48))
    got = {(r.a, r.c): r.d_ac for r in records if not is_integer(2 * r.a)}
    assert got == large_density_pairs_up_to(48)
    for r in records:
        bound_audit(r)
        if (r.a, r.c) in HALF_DENSITY_FIELDS:
            assert r.half_fields == (HALF_DENSITY_FIELDS[(r.a, r.c)],)
