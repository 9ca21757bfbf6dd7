from fractions import Fraction as F
import csv
import math

import pytest
from hypothesis import given

from hgdensity.errors import HGError
from hgdensity.numtheory import euler_phi, fractional_part, is_integer
from hgdensity.schwarz_search import (
    CSV_HEADER,
    AuditError,
    SearchConfig,
    SearchRecord,
    bound_audit,
    candidate_discriminants,
    d_ac,
    load_records,
    persist,
    sweep,
)

from reference_data import HALF_DENSITY_FIELDS, large_density_pairs_up_to
from strategies import unit_interval


def _brute_d_ac(a, c):
    M1 = math.lcm(a.denominator, c.denominator)
    count = 0
    for u in range(1, M1 + 1):
        if math.gcd(u, M1) != 1:
            continue
        xs = [pow(u, j, M1) for j in range(euler_phi(M1))]
        if is_integer(2 * a):
            ok = all(fractional_part(-x * c) <= F(1, 2) for x in xs)
        else:
            ok = all(2 * fractional_part(-x * c) <= fractional_part(-2 * x * a) for x in xs)
        count += ok
    return F(count, euler_phi(M1))


@pytest.mark.parametrize("a, c, d", [(F(1, 3), F(5, 6), F(1, 2)), (F(2, 7), F(5, 6), F(1, 3)),
                                     (F(1, 16), F(5, 6), F(3, 8))])
def test_d_ac_examples(a, c, d):
    assert d_ac(a, c) == d


@given(unit_interval(30), unit_interval(30))
def test_d_ac_matches_brute_force(a, c):
    d = d_ac(a, c)
    assert d == _brute_d_ac(a, c)
    if not (is_integer(2 * a) and is_integer(2 * c)):
        assert d <= F(1, 2)


def test_d_ac_domain():
    with pytest.raises(HGError):
        d_ac(F(3, 2), F(1, 3))


def test_candidate_discriminants():
    assert candidate_discriminants(12) == [-1, -2, 2, -3, 3, -6, 6]
    assert candidate_discriminants(1) == [-1]


@pytest.fixture(scope="module")
def records12():
    return sweep(SearchConfig(12))


def test_sweep_height_12_matches_table(records12):
    got = {(r.a, r.c): r.d_ac for r in records12 if not is_integer(2 * r.a)}
    assert got == large_density_pairs_up_to(12)


def test_sweep_order_and_fields(records12):
    keys = [(r.a.denominator, r.a.numerator, r.c.denominator, r.c.numerator) for r in records12]
    assert keys == sorted(keys)
    for r in records12:
        if (r.a, r.c) in HALF_DENSITY_FIELDS:
            assert r.unique_half_field == HALF_DENSITY_FIELDS[(r.a, r.c)]
        if r.d_ac != F(1, 2):
            assert r.tested_fields == ()


def test_sweep_height_2_is_empty():
    assert sweep(SearchConfig(2)) == []


def test_threshold_monotone(records12):
    low = {(r.a, r.c) for r in sweep(SearchConfig(10, threshold=F(1, 5)))}
    high = {(r.a, r.c) for r in records12 if r.a.denominator <= 10 and r.c.denominator <= 10}
    assert high <= low


def test_parallel_sweep_identical(records12):
    assert sweep(SearchConfig(12, workers=2)) == records12


def test_config_validation():
    with pytest.raises(HGError):
        SearchConfig(1)
    with pytest.raises(HGError):
        SearchConfig(10, threshold=F(3, 2))


def test_audit(records12):
    for r in records12:
        res = bound_audit(r)
        assert not res.skipped
        assert all(dk <= F(1, 4) for _, dk in res.coprime_fields)
    assert bound_audit(SearchRecord(F(1, 2), F(1, 2), d_ac(F(1, 2), F(1, 2)))).skipped
    with pytest.raises(AuditError):
        bound_audit(SearchRecord(F(1, 3), F(5, 6), F(3, 4)))


def test_persist_roundtrip(tmp_path, records12):
    path = tmp_path / "out.csv"
    persist(records12, path)
    rows = list(csv.reader(path.open()))
    assert tuple(rows[0]) == CSV_HEADER
    assert len(rows) == len(records12) + 1
    assert load_records(tmp_path / "out.json") == records12
    first = path.read_bytes()
    persist(records12, path)
    assert path.read_bytes() == first


def test_persist_half_density_rows(tmp_path, records24):
    half = [r for r in records24 if r.d_ac == F(1, 2) and r.a.denominator <= 20
            and r.c.denominator <= 20 and not is_integer(2 * r.a)]
    assert len(half) == 36
    persist(half, tmp_path / "h.csv", tmp_path / "side.json")
    assert len((tmp_path / "h.csv").read_text().splitlines()) == 37
    assert (tmp_path / "side.json").exists()


def test_persist_empty(tmp_path):
    persist([], tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_text() == ",".join(CSV_HEADER) + "\n"


def test_persist_error_has_path(tmp_path):
    with pytest.raises(OSError, match="missing"):
        persist([], tmp_path / "missing" / "x.csv")
