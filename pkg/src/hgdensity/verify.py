"""End-to-end checks: class-rule predictions against exact valuations."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .errors import NoWitnessError
from .params import HypergeomParams, QuadraticHGParams
from .quadratic_density import bk_set, unbounded_witness_quadratic
from .rational_density import bounded_class_set, unbounded_witness
from .valuation import exact_valuation_oracle, valuation_profile

INTEGRAL, WITNESSED, INCONCLUSIVE, FAILED, SKIPPED = "integral", "witnessed", "inconclusive", "FAILED", "skipped"


@dataclass(frozen=True)
class VerifyRow:
    p: int
    predicted_bounded: Optional[bool]
    status: str
    min_valuation: Optional[float] = None
    witness_k: Optional[int] = None
    witness_valuation: Optional[int] = None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status != FAILED

    def to_json(self) -> dict:
        out = asdict(self)
        if out["min_valuation"] == math.inf:
            out["min_valuation"] = "inf"
        return out

    def __str__(self):
        parts = [f"p={self.p}", self.status]
        if self.min_valuation is not None:
            parts.append(f"min_nu={self.min_valuation}")
        if self.witness_k is not None:
            parts.append(f"k={self.witness_k} nu={self.witness_valuation}")
        if self.note:
            parts.append(self.note)
        return "\t".join(parts)


def _min_valuation(params, p: int, k_limit: int) -> float:
    return min(valuation_profile(params, p, k_limit + 1))


def verify_rational(params: HypergeomParams, primes: Sequence[int], k_limit: int = 2000,
                    depth: int = 1) -> list[VerifyRow]:
    """Bounded primes must stay integral up to ``k_limit``; the others must be witnessed.

    Witnesses are re-checked with the exact oracle, not just the carry formula.
    """
    report = bounded_class_set(params)
    norm = report.params
    rows = []
    for p in primes:
        pred = report.predicts_bounded(p)
        if pred is None or not norm.is_good_prime(p):
            rows.append(VerifyRow(p, pred, SKIPPED, note="not above the good-prime threshold"))
            continue
        if pred:
            lo = _min_valuation(norm, p, k_limit)
            rows.append(VerifyRow(p, True, INTEGRAL if lo >= 0 else FAILED, lo))
            continue
        try:
            w = unbounded_witness(norm, p, depth)
        except NoWitnessError as e:
            rows.append(VerifyRow(p, False, FAILED, note=str(e)))
            continue
        nu = exact_valuation_oracle(norm, p, w.k)
        status = WITNESSED if nu <= -(depth + 1) else FAILED
        rows.append(VerifyRow(p, False, status, witness_k=w.k, witness_valuation=nu))
    return rows


def verify_quadratic(params: QuadraticHGParams, primes: Sequence[int], k_limit: int = 2000,
                     r: int = 2, scan_limit: int = 1000) -> list[VerifyRow]:
    """Same check at split primes; a missing witness is inconclusive, not a failure."""
    report = bk_set(params)
    rows = []
    for p in primes:
        if p == 2 or params.splitting(p) != 1 or not params.is_p_integral(p):
            continue
        pred = report.predicts_bounded(p)
        if pred:
            lo = _min_valuation(params, p, k_limit)
            rows.append(VerifyRow(p, True, INTEGRAL if lo >= 0 else FAILED, lo))
            continue
        w = unbounded_witness_quadratic(params, p, r, scan_limit)
        if w is None:
            rows.append(VerifyRow(p, False, INCONCLUSIVE,
                                  note=f"no witness within {scan_limit} digits (conjecture-conditional)"))
            continue
        nu = exact_valuation_oracle(params, p, w.m)
        status = WITNESSED if nu <= -r else FAILED
        rows.append(VerifyRow(p, False, status, witness_k=w.m, witness_valuation=nu))
    return rows
