"""Bounded primes of ``nFn-1`` with rational parameters.

A unit class ``u mod N`` (``N`` the lcm of the parameter denominators) is
*numerator majorized* when, for every power ``x = u^j``, the values
``{-x beta_i}`` can be matched injectively to values ``{-x alpha_k}`` that
dominate them.  For primes beyond :meth:`HypergeomParams.good_prime_threshold`
the series is p-adically bounded (indeed integral) exactly on those classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .digits import rational_expansion
from .errors import NoWitnessError, ParameterError
from .numtheory import (
    CongruenceClass,
    cyclic_orbit,
    euler_phi,
    format_rational,
    fractional_part,
    unit_residues,
)
from .params import HypergeomParams
from .valuation import Regime, asymptotic_boundedness_shortcut, coefficient_valuation


def _frac_neg_multiple(x: int, a: Fraction) -> Fraction:
    """``{-x a}`` computed on numerators."""
    return Fraction((-x * a.numerator) % a.denominator, a.denominator)


def _dominance_failure(alpha_vals: Sequence[Fraction], beta_vals: Sequence[Fraction]) -> Optional[int]:
    """First rank (0-based) where the sorted beta value exceeds the sorted alpha value."""
    a_sorted = sorted(alpha_vals, reverse=True)
    b_sorted = sorted(beta_vals, reverse=True)
    if len(b_sorted) > len(a_sorted):
        return len(a_sorted)
    for i, b in enumerate(b_sorted):
        if b > a_sorted[i]:
            return i
    return None


def orbit_values(params: HypergeomParams, p: int, count: int) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """``[{-p^j x} for j < count]`` for each alpha and each beta, in parameter order."""
    row = lambda x: [fractional_part(-(p**j) * x) for j in range(count)]
    return [row(a) for a in params.alpha], [row(b) for b in params.beta]


@dataclass(frozen=True)
class MajorizationVerdict:
    cls: CongruenceClass
    majorized: bool
    failing_j: Optional[int] = None
    failing_js: tuple[int, ...] = ()
    # first j at which some beta value dominates every alpha value
    dominant_failure_j: Optional[int] = None
    failing_assignment: Optional[str] = None


def is_numerator_majorized(params: HypergeomParams, u: int, modulus: Optional[int] = None) -> MajorizationVerdict:
    """Test the class ``u`` for numerator majorization over ``j = 0 .. ord(u) - 1``.

    Sorted dominance stands in for the search over permutations: an injective
    dominating matching exists iff the i-th largest beta value is at most the
    i-th largest alpha value for every i.
    """
    norm = params.normalized()
    N = modulus or norm.modulus
    cls = CongruenceClass.of(u, N)
    if not cls.is_unit and N > 1:
        raise ParameterError(f"{cls} is not a unit class")
    failing, dominant, note = [], None, None
    for j, x in enumerate(cyclic_orbit(cls.residue, N)):
        av = [_frac_neg_multiple(x, a) for a in norm.alpha]
        bv = [_frac_neg_multiple(x, b) for b in norm.beta]
        rank = _dominance_failure(av, bv)
        if rank is None:
            continue
        failing.append(j)
        if note is None:
            b_sorted = sorted(bv, reverse=True)
            a_sorted = sorted(av, reverse=True)
            a_txt = format_rational(a_sorted[rank]) if rank < len(a_sorted) else "none"
            note = (f"j={j}: beta value {format_rational(b_sorted[rank])} at rank {rank + 1} "
                    f"exceeds alpha value {a_txt}")
        if dominant is None and bv and max(bv) > max(av, default=Fraction(-1)):
            dominant = j
    return MajorizationVerdict(cls, not failing, failing[0] if failing else None,
                               tuple(failing), dominant, note)


@dataclass(frozen=True)
class RationalDensityReport:
    params: HypergeomParams
    modulus: int
    bounded_classes: tuple[int, ...]
    density: Fraction
    good_prime_threshold: int
    terminating: bool = False
    regime: Regime = Regime.REGULAR_SINGULAR

    def predicts_bounded(self, p: int) -> Optional[bool]:
        """Class-rule prediction for a prime above the threshold, else ``None``."""
        if p <= self.good_prime_threshold:
            return None
        if self.terminating or self.regime is Regime.ALL_PRIMES_BOUNDED:
            return True
        if self.regime is Regime.NO_PRIMES_BOUNDED:
            return False
        return p % self.modulus in self.bounded_classes

    def to_json(self) -> dict:
        return {
            "alpha": [format_rational(a) for a in self.params.alpha],
            "beta": [format_rational(b) for b in self.params.beta],
            "modulus": self.modulus,
            "bounded_classes": list(self.bounded_classes),
            "density": {"num": self.density.numerator, "den": self.density.denominator},
            "good_prime_threshold": self.good_prime_threshold,
            "terminating": self.terminating,
            "regime": self.regime.value,
        }


def _majorized_powers(norm: HypergeomParams, N: int) -> dict[int, bool]:
    return {x: _dominance_failure([_frac_neg_multiple(x, a) for a in norm.alpha],
                                  [_frac_neg_multiple(x, b) for b in norm.beta]) is None
            for x in unit_residues(N)}


def bounded_class_set(params: HypergeomParams) -> RationalDensityReport:
    """The set ``B(alpha; beta)`` of numerator-majorized classes and its density."""
    norm = params.normalized()
    N = norm.modulus
    units = unit_residues(N)
    threshold = params.good_prime_threshold()
    regime = asymptotic_boundedness_shortcut(norm)
    if params.terminating or regime is Regime.ALL_PRIMES_BOUNDED:
        return RationalDensityReport(norm, N, units, Fraction(1), threshold, params.terminating, regime)
    if regime is Regime.NO_PRIMES_BOUNDED:
        return RationalDensityReport(norm, N, (), Fraction(0), threshold, False, regime)
    ok = _majorized_powers(norm, N)
    bounded = tuple(u for u in units if all(ok[x] for x in cyclic_orbit(u, N)))
    return RationalDensityReport(norm, N, bounded, Fraction(len(bounded), euler_phi(N)), threshold)


def max_condition_bounded_set(a: Fraction, b: Fraction, c: Fraction) -> tuple[int, frozenset[int]]:
    """``B(a, b; c) = {u : {-u^j c} <= max({-u^j a}, {-u^j b}) for all j}`` for ``2F1``.

    Kept deliberately separate from :func:`bounded_class_set` so each can
    check the other.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    N = math.lcm((a - 1).denominator, (b - 1).denominator, (c - 1).denominator)
    phi = euler_phi(N)
    out = set()
    for u in range(N):
        if math.gcd(u, N) != 1:
            continue
        if all(fractional_part(-pow(u, j, N) * c) <= max(fractional_part(-pow(u, j, N) * a),
                                                       fractional_part(-pow(u, j, N) * b))
               for j in range(phi)):
            out.add(u % N)
    return N, frozenset(out)


def zero_density_test(params: HypergeomParams) -> bool:
    """Density zero iff, with both lists sorted increasingly in ``(0, 1]``, some ``beta_i < alpha_i``."""
    norm = params.normalized()
    if params.terminating:
        return False
    regime = asymptotic_boundedness_shortcut(norm)
    if regime is not Regime.REGULAR_SINGULAR:
        return regime is Regime.NO_PRIMES_BOUNDED
    a_sorted = sorted(norm.alpha)
    b_sorted = sorted(norm.beta)
    return any(b < a for a, b in zip(a_sorted, b_sorted))


@dataclass(frozen=True)
class RationalWitness:
    p: int
    depth: int
    k: int
    digit_index: int
    period: int
    branch: str
    valuation: int
    params: HypergeomParams = field(repr=False)


def _witness_candidates(alpha_digits, beta_digits):
    """Digit thresholds ``t`` for which more beta than alpha digits reach ``t``, in proof order."""
    out = []
    if beta_digits and max(beta_digits) > max(alpha_digits):
        # some beta digit dominates all alpha digits; first such in list order
        i = next(i for i, d in enumerate(beta_digits) if d > max(alpha_digits))
        out.append(("dominant", beta_digits[i]))
    rank = _dominance_failure(alpha_digits, beta_digits)
    if rank is not None:
        out.append(("sorted", sorted(beta_digits, reverse=True)[rank]))
    return out


def unbounded_witness(params: HypergeomParams, p: int, depth: int) -> RationalWitness:
    """Index ``k`` with ``nu_p(A_k) <= -(depth + 1)`` for the normalized series.

    At a digit index ``j`` where the base-``p`` digits of the ``beta_i - 1``
    violate majorization by those of the ``alpha_i - 1``, take
    ``k = (p - t) * sum_{s=0}^{depth} p^(j + s T)`` with ``t`` the offending
    beta digit and ``T`` a common period, so the offending betas carry at
    every block while too few alphas do.  The result is checked with the
    carry formula before it is returned.
    """
    if depth < 0:
        raise ParameterError(f"depth must be nonnegative, got {depth}")
    norm = params.normalized()
    if params.terminating or asymptotic_boundedness_shortcut(norm) is not Regime.REGULAR_SINGULAR:
        raise ParameterError("witness construction needs a non-terminating nFn-1")
    report = bounded_class_set(params)
    if report.predicts_bounded(p):
        raise NoWitnessError(f"no witness exists: p = {p} is bounded ({p % report.modulus} mod {report.modulus})")
    a_exp = [rational_expansion(a - 1, p) for a in norm.alpha]
    b_exp = [rational_expansion(b - 1, p) for b in norm.beta]
    pre = max(len(e.preperiod) for e in a_exp + b_exp)
    period = math.lcm(*(len(e.period) for e in a_exp + b_exp))
    target = -(depth + 1)
    for j in range(pre, pre + period):
        ad = [e.digit(j) for e in a_exp]
        bd = [e.digit(j) for e in b_exp]
        for branch, t in _witness_candidates(ad, bd):
            k = (p - t) * sum(p ** (j + s * period) for s in range(depth + 1))
            nu = coefficient_valuation(norm, p, k)
            if nu <= target:
                return RationalWitness(p, depth, k, j, period, branch, nu, norm)
    raise NoWitnessError(f"no witness exists at p = {p}: digits are numerator majorized")
