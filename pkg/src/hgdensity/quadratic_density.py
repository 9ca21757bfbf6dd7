"""Bounded primes of ``2F1(a + b sqrt(D), a - b sqrt(D); c; z)``.

Only primes split in ``K = Q(sqrt(D))`` can be bounded.  Among split classes
``u mod M`` the bounded ones are those passing, for every power ``x = u^j``,

* ``{-x c} <= {-x/2}`` when the trace ``2a`` is integral (``M`` even, so the
  right side is ``1/2``), with ``M = lcm(den c, 2|disc K|)``;
* ``{-x c} <= {-2 x a} / 2`` otherwise, with ``M = lcm(den a, den c, |disc K|)``.

The resulting density is a lower bound, exact if quadratic irrationals have
well-distributed p-adic digits; reports carry ``conditional_exact`` to say so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .digits import QuadraticDigitStream, rational_expansion
from .errors import BadPrimeError, NotSplitError, ParameterError
from .numtheory import euler_phi, format_rational, fractional_part, kronecker_symbol, unit_residues
from .params import QuadraticHGParams
from .valuation import coefficient_valuation, valuation_profile

HALF = Fraction(1, 2)


@lru_cache(maxsize=512)
def _units_array(M: int) -> np.ndarray:
    return np.array(unit_residues(M), dtype=np.int64)


def admissible_classes(a: Fraction, c: Fraction, M: int, integral: bool) -> np.ndarray:
    """Unit residues ``u mod M`` whose every power passes the trace inequality.

    ``a`` and ``c`` must have denominators dividing ``M`` (and ``M`` must be
    even when ``integral``).  Returned sorted.
    """
    U = _units_array(M)
    if M == 1:
        return U
    C = c.numerator * (M // c.denominator)
    lhs = (-U * C) % M
    mask = np.zeros(M, dtype=bool)
    if integral:
        if M % 2:
            raise ParameterError("integral-trace modulus must be even")
        mask[U] = lhs <= (-U * (M // 2)) % M
    else:
        A2 = 2 * a.numerator * (M // a.denominator)
        mask[U] = 2 * lhs <= (-U * A2) % M
    # follow only the classes still passing; a class is done once its power returns to 1
    alive = U[mask[U] & mask[1]]
    cur = alive.copy()
    done = []
    while alive.size:
        cur = cur * alive % M
        fin = cur == 1
        done.append(alive[fin])
        alive, cur = alive[~fin], cur[~fin]
        keep = mask[cur]
        alive, cur = alive[keep], cur[keep]
    return np.sort(np.concatenate(done)) if done else alive


@dataclass(frozen=True)
class QuadraticDensityReport:
    params: QuadraticHGParams
    modulus: int
    bounded_classes: tuple[int, ...]
    density_lower: Fraction
    density_upper: Fraction = HALF
    conditional_exact: bool = True
    trace_case: str = "nonintegral"
    fundamental_discriminant: int = 0
    warnings: tuple[str, ...] = ()

    @property
    def density(self) -> Fraction:
        return self.density_lower

    def predicts_bounded(self, p: int) -> bool:
        return p % self.modulus in self.bounded_classes

    def to_json(self) -> dict:
        prm = self.params
        return {
            "a": format_rational(prm.a), "b": format_rational(prm.b),
            "c": format_rational(prm.c), "D": format_rational(prm.D),
            "modulus": self.modulus,
            "bounded_classes": list(self.bounded_classes),
            "density": {"num": self.density_lower.numerator, "den": self.density_lower.denominator},
            "upper_bound": {"num": self.density_upper.numerator, "den": self.density_upper.denominator},
            "conditional_exact": self.conditional_exact,
            "trace_case": self.trace_case,
            "fundamental_discriminant": self.fundamental_discriminant,
            "warnings": list(self.warnings),
        }


def splits(u: int, disc: int) -> bool:
    return kronecker_symbol(disc, u) == 1


def quadratic_modulus(params: QuadraticHGParams) -> int:
    disc = abs(params.discriminant)
    c = params.c_normalized
    if params.trace_integral:
        return math.lcm(c.denominator, 2 * disc)
    return math.lcm(params.a_normalized.denominator, c.denominator, disc)


def _split_classes(params: QuadraticHGParams, M: int) -> tuple[int, ...]:
    disc = params.discriminant
    got = admissible_classes(params.a_normalized, params.c_normalized, M, params.trace_integral)
    return tuple(int(u) for u in got if splits(int(u), disc))


def bk_set(params: QuadraticHGParams, modulus: Optional[int] = None) -> QuadraticDensityReport:
    """Split classes satisfying the trace inequality, and their density.

    ``b`` is never consulted.  ``modulus`` may override the default modulus
    with any multiple of it.
    """
    M0 = quadratic_modulus(params)
    M = modulus or M0
    if M % M0:
        raise ParameterError(f"modulus {M} is not a multiple of {M0}")
    classes = _split_classes(params, M)
    density = Fraction(len(classes), euler_phi(M))
    warnings = []
    alt = math.lcm(M, params.a_normalized.denominator, params.c_normalized.denominator,
                   2 * abs(params.discriminant))
    if alt != M:
        alt_density = Fraction(len(_split_classes(params, alt)), euler_phi(alt))
        if alt_density != density:
            warnings.append(f"density {alt_density} at modulus {alt} differs from {density} at {M}")
    return QuadraticDensityReport(
        params, M, classes, density,
        trace_case="integral" if params.trace_integral else "nonintegral",
        fundamental_discriminant=params.discriminant,
        warnings=tuple(warnings),
    )


def zero_density_quadratic(params: QuadraticHGParams) -> bool:
    """Closed-form test for an empty bounded set (conditional on digit normality)."""
    c = params.c_normalized
    if params.trace_integral:
        return c < HALF
    return 2 * fractional_part(-c) > fractional_part(-2 * params.a)


@dataclass(frozen=True)
class QuadraticWitness:
    p: int
    r: int
    m: int
    indices: tuple[int, ...]
    valuation: int


def _check_split_good(params: QuadraticHGParams, p: int) -> None:
    if params.splitting(p) != 1:
        raise NotSplitError(f"p = {p} does not split in Q(sqrt({params.d}))")
    if p == 2 or not params.is_p_integral(p):
        raise BadPrimeError(f"bad prime {p} for {params}")


def unbounded_witness_quadratic(params: QuadraticHGParams, p: int, r: int,
                                scan_limit: int = 1000) -> Optional[QuadraticWitness]:
    """Look for ``r`` digit positions where ``c - 1`` beats both ``a +- b sqrt(D) - 1``.

    Returns ``m_r = sum (p - gamma_j) p^j`` over the first ``r`` such
    positions ``j < scan_limit``, with ``nu_p(A_{m_r}) <= -r``; ``None`` if
    the scan is too short, which says nothing about boundedness.
    """
    _check_split_good(params, p)
    if r < 0:
        raise ParameterError(f"r must be nonnegative, got {r}")
    if r == 0:
        return QuadraticWitness(p, 0, 0, (), 0)
    plus = QuadraticDigitStream(params.a, params.b, params.D, p, 1)
    minus = QuadraticDigitStream(params.a, params.b, params.D, p, -1)
    gamma = rational_expansion(params.c - 1, p)
    plus.digits(scan_limit)
    minus.digits(scan_limit)
    indices = []
    for j in range(scan_limit):
        g = gamma.digit(j)
        if g > max(plus.digit(j), minus.digit(j)):
            indices.append(j)
            if len(indices) == r:
                break
    else:
        return None
    m = sum((p - gamma.digit(j)) * p**j for j in indices)
    nu = coefficient_valuation(params, p, m)
    if nu > -r:
        raise AssertionError(f"witness m_{r} at p = {p} has valuation {nu} > {-r}")
    return QuadraticWitness(p, r, m, tuple(indices), nu)


@dataclass(frozen=True)
class SplitCheckRow:
    p: int
    splitting: int
    min_valuation: float
    argmin: int
    multiples_decreasing: Optional[bool] = None


def split_upper_bound_check(params: QuadraticHGParams, sample_primes: Sequence[int],
                            k_limit: int = 100) -> list[SplitCheckRow]:
    """Exact minimum of ``nu_p(A_k)`` over ``k <= k_limit`` for each sampled prime.

    At inert or ramified primes the valuation along ``k = p, 2p, 3p, ...``
    should be nonincreasing; that is recorded in ``multiples_decreasing``.
    """
    rows = []
    for p in sample_primes:
        prof = valuation_profile(params, p, k_limit + 1)
        finite = [(v, k) for k, v in enumerate(prof) if v != math.inf]
        lo, arg = min(finite)
        kind = params.splitting(p)
        dec = None
        if kind != 1:
            along = [prof[k] for k in range(p, k_limit + 1, p)]
            dec = all(y <= x for x, y in zip(along, along[1:]))
        rows.append(SplitCheckRow(p, kind, lo, arg, dec))
    return rows
