"""Sweeps over ``(a, c)`` for large densities ``D(a; c)`` and half-density fields.

``D(a; c)`` is the quadratic bounded-class density with the splitting
condition dropped and the modulus ``M1 = lcm(den a, den c)``.  For pairs with
``D(a; c) = 1/2`` every ``K = Q(sqrt(D))`` with ``|D|`` a squarefree divisor
of ``M1`` is tested for ``D_K(a; c) = 1/2``.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import HGError
from .numtheory import euler_phi, factorize, format_rational, fundamental_discriminant, is_integer, parse_rational
from .params import QuadraticHGParams
from .quadratic_density import HALF, admissible_classes, bk_set

log = logging.getLogger(__name__)

QUARTER = Fraction(1, 4)
# extra fields for the coprime-discriminant audit
AUDIT_PANEL = (-1, 2, -2, 3, -3, 5, -5, 6, -6, -7, 7, -11, 13, -15, 17, -19, -23)


class AuditError(AssertionError):
    """A proven bound was violated: an implementation bug, never expected."""


@dataclass(frozen=True)
class SearchConfig:
    max_height: int
    threshold: Fraction = QUARTER
    output_path: Optional[Path] = None
    json_path: Optional[Path] = None
    workers: int = 1

    def __post_init__(self):
        if self.max_height < 2:
            raise HGError(f"max_height must be >= 2, got {self.max_height}")
        if not 0 <= self.threshold <= 1:
            raise HGError(f"threshold must lie in [0, 1], got {self.threshold}")


@dataclass(frozen=True)
class SearchRecord:
    a: Fraction
    c: Fraction
    d_ac: Fraction
    # (D, D_K(a; c)) for every candidate field tested; only filled when d_ac = 1/2
    tested_fields: tuple[tuple[int, Fraction], ...] = ()

    @property
    def attaining_fields(self) -> tuple[tuple[int, Fraction], ...]:
        return tuple((D, dk) for D, dk in self.tested_fields if dk == HALF)

    @property
    def half_fields(self) -> tuple[int, ...]:
        return tuple(D for D, _ in self.attaining_fields)

    @property
    def unique_half_field(self) -> Optional[int]:
        hf = self.half_fields
        return hf[0] if len(hf) == 1 else None

    @property
    def m1(self) -> int:
        return math.lcm(self.a.denominator, self.c.denominator)

    def to_json(self) -> dict:
        return {
            "a": format_rational(self.a),
            "c": format_rational(self.c),
            "d_ac": {"num": self.d_ac.numerator, "den": self.d_ac.denominator},
            "fields": [{"D": D, "D_K": {"num": dk.numerator, "den": dk.denominator}}
                       for D, dk in self.tested_fields],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SearchRecord":
        frac = lambda o: Fraction(o["num"], o["den"])
        return cls(parse_rational(obj["a"]), parse_rational(obj["c"]), frac(obj["d_ac"]),
                   tuple((int(f["D"]), frac(f["D_K"])) for f in obj["fields"]))


def d_ac(a: Fraction, c: Fraction) -> Fraction:
    """``|B(a; c)| / phi(M1)`` for ``0 < a, c < 1``."""
    a, c = Fraction(a), Fraction(c)
    if not (0 < a < 1 and 0 < c < 1):
        raise HGError(f"d_ac needs 0 < a, c < 1, got a={a}, c={c}")
    M1 = math.lcm(a.denominator, c.denominator)
    classes = admissible_classes(a, c, M1, is_integer(2 * a))
    return Fraction(len(classes), euler_phi(M1))


def candidate_discriminants(m1: int) -> list[int]:
    """Squarefree ``D`` with ``|D|`` dividing ``m1``, both signs, ``D != 1``."""
    primes = [p for p, _ in factorize(m1)]
    divisors = [1]
    for p in primes:
        divisors += [d * p for d in divisors]
    out = {s * d for d in divisors for s in (1, -1)} - {1}
    return sorted(out, key=lambda D: (abs(D), D))


def field_densities(a: Fraction, c: Fraction, discriminants: Iterable[int]) -> tuple[tuple[int, Fraction], ...]:
    return tuple((D, bk_set(QuadraticHGParams(a, 1, c, D)).density_lower) for D in discriminants)


def _fractions_up_to(height: int) -> list[Fraction]:
    return [Fraction(n, d) for d in range(2, height + 1) for n in range(1, d) if math.gcd(n, d) == 1]


def _passes_unit_class(a: Fraction, c: Fraction) -> bool:
    # B(a; c) is empty unless the class 1 passes; integer form of the u = 1 inequality
    lhs = (-c.numerator) % c.denominator
    if is_integer(2 * a):
        return 2 * lhs <= c.denominator
    rhs = (-2 * a.numerator) % a.denominator
    return 2 * lhs * a.denominator <= rhs * c.denominator


def _sweep_row(args: tuple[Fraction, Sequence[Fraction], Fraction]) -> list[SearchRecord]:
    a, cs, threshold = args
    out = []
    for c in cs:
        if is_integer(2 * a) and is_integer(2 * c):
            continue
        if not _passes_unit_class(a, c):
            continue
        dens = d_ac(a, c)
        if dens <= threshold:
            continue
        fields = ()
        if dens == HALF:
            fields = field_densities(a, c, candidate_discriminants(math.lcm(a.denominator, c.denominator)))
        out.append(SearchRecord(a, c, dens, fields))
    return out


def _sort_key(r: SearchRecord):
    return (r.a.denominator, r.a.numerator, r.c.denominator, r.c.numerator)


def sweep(config: SearchConfig) -> list[SearchRecord]:
    """All pairs of height at most ``max_height`` with ``D(a; c) > threshold``.

    Pairs with ``2a`` and ``2c`` both integral are skipped.  Output order is
    by denominator, then numerator, of ``a`` and then ``c``, independent of
    the worker count.  Persists when ``output_path`` is set.
    """
    fracs = _fractions_up_to(config.max_height)
    jobs = [(a, fracs, config.threshold) for a in fracs]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_sweep_row, jobs, chunksize=4))
    else:
        rows = [_sweep_row(j) for j in jobs]
    records = sorted((r for row in rows for r in row), key=_sort_key)
    log.info("sweep height %d: %d records above %s", config.max_height, len(records), config.threshold)
    for r in records:
        if r.d_ac == HALF and len(r.half_fields) > 1:
            log.warning("several half-density fields for a=%s c=%s: %s", r.a, r.c, r.half_fields)
    if config.output_path is not None:
        persist(records, config.output_path, config.json_path)
    return records


@dataclass(frozen=True)
class AuditResult:
    record: SearchRecord
    skipped: bool
    coprime_fields: tuple[tuple[int, Fraction], ...] = field(default=())


def bound_audit(record: SearchRecord, panel: Sequence[int] = AUDIT_PANEL) -> AuditResult:
    """Check ``D(a; c) <= 1/2`` and ``D_K(a; c) <= 1/4`` for fields coprime to ``M1``.

    Raises :class:`AuditError` on any violation.  Pairs with ``2a`` and
    ``2c`` both integral fall outside both bounds and are skipped.
    """
    a, c = record.a, record.c
    if is_integer(2 * a) and is_integer(2 * c):
        return AuditResult(record, True)
    if record.d_ac > HALF:
        raise AuditError(f"D(a;c) = {record.d_ac} > 1/2 for a={a}, c={c}")
    for D, dk in record.tested_fields:
        if dk > record.d_ac:
            raise AuditError(f"D_K = {dk} exceeds D(a;c) = {record.d_ac} for D={D}, a={a}, c={c}")
    m1 = record.m1
    tested = dict(record.tested_fields)
    coprime = []
    for D in sorted(set(panel) | set(tested)):
        if math.gcd(fundamental_discriminant(D), m1) != 1:
            continue
        dk = tested[D] if D in tested else bk_set(QuadraticHGParams(a, 1, c, D)).density_lower
        if dk > QUARTER:
            raise AuditError(f"D_K = {dk} > 1/4 for coprime D={D}, a={a}, c={c}")
        coprime.append((D, dk))
    return AuditResult(record, False, tuple(coprime))


CSV_HEADER = ("a", "c", "D_ac_num", "D_ac_den", "half_fields")


def persist(records: Sequence[SearchRecord], path, json_path=None) -> None:
    """Write the CSV table and a JSON sidecar (default: same stem, ``.json``)."""
    path = Path(path)
    json_path = Path(json_path) if json_path is not None else path.with_suffix(".json")
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for r in records:
                w.writerow([format_rational(r.a), format_rational(r.c), r.d_ac.numerator,
                            r.d_ac.denominator, ";".join(map(str, r.half_fields))])
        json_path.write_text(json.dumps([r.to_json() for r in records], indent=1) + "\n")
    except OSError as e:
        raise OSError(f"cannot write search results to {e.filename or path}: {e.strerror}") from e


def load_records(json_path) -> list[SearchRecord]:
    return [SearchRecord.from_json(o) for o in json.loads(Path(json_path).read_text())]
