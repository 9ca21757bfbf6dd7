"""Hypergeometric coefficients and their p-adic valuations.

Two independent routes to ``nu_p(A_k)``:

* :func:`coefficient_valuation` counts carries (Kummer) in the base-``p``
  addition ``(x - 1) + k`` for each parameter ``x``;
* :func:`exact_valuation_oracle` factors ``p`` out of the exact coefficient,
  or, for huge ``k``, counts the multiples of ``p^e`` among the factors of
  each rising factorial.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

from .digits import DigitSource, QuadraticDigitStream, RationalExpansion, hensel_sqrt, rational_expansion
from .errors import BadPrimeError, NotSplitError, ParameterError
from .numtheory import RationalLike, is_integer, legendre_factorial_valuation, rational_mod, valuation
from .params import HypergeomParams, QuadraticHGParams

Params = Union[HypergeomParams, QuadraticHGParams]
INF = math.inf

# Above this index the oracle switches from the exact coefficient to counting.
DIRECT_LIMIT = 3000


class Regime(enum.Enum):
    ALL_PRIMES_BOUNDED = "all_primes_bounded"
    NO_PRIMES_BOUNDED = "no_primes_bounded"
    REGULAR_SINGULAR = "regular_singular"


def rising_factorial(x: RationalLike, k: int) -> Fraction:
    if k < 0:
        raise ParameterError(f"k must be nonnegative, got {k}")
    x = Fraction(x)
    out = Fraction(1)
    for i in range(k):
        out *= x + i
    return out


def _ratio(params: Params, k: int) -> Fraction:
    """``A_{k+1} / A_k``."""
    if isinstance(params, QuadraticHGParams):
        return params.min_poly(-k) / ((params.c + k) * (k + 1))
    num = Fraction(1)
    for a in params.alpha:
        num *= a + k
    den = Fraction(k + 1)
    for b in params.beta:
        den *= b + k
    if den == 0:
        raise ParameterError(f"denominator factor vanishes at k = {k}")
    return num / den


def coefficients(params: Params, count: int) -> Iterator[Fraction]:
    """Yield ``A_0, ..., A_{count-1}``."""
    a = Fraction(1)
    for k in range(count):
        yield a
        if k + 1 < count:
            a *= _ratio(params, k)


def coefficient(params: Params, k: int) -> Fraction:
    if k < 0:
        raise ParameterError(f"k must be nonnegative, got {k}")
    if isinstance(params, QuadraticHGParams):
        num = Fraction(1)
        for j in range(k):
            num *= params.min_poly(-j)
        return num / (rising_factorial(params.c, k) * math.factorial(k))
    num = Fraction(1)
    for a in params.alpha:
        num *= rising_factorial(a, k)
    den = Fraction(math.factorial(k))
    for b in params.beta:
        den *= rising_factorial(b, k)
    return num / den


# --- carries -----------------------------------------------------------------

def carry_count(x: DigitSource, k: int) -> Union[int, float]:
    """Carries in the base-``p`` sum ``x + k``; ``inf`` when the carry never stops."""
    if k < 0:
        raise ParameterError(f"k must be nonnegative, got {k}")
    if isinstance(x, QuadraticDigitStream) and not x.coeff:
        x = rational_expansion(x.a - 1, x.p)
    p = x.p
    tail = isinstance(x, RationalExpansion) and x.has_infinite_tail
    carry = count = j = 0
    while k or carry:
        if not k and tail and j >= len(x.preperiod):
            return INF
        k, kd = divmod(k, p)
        carry = 1 if x.digit(j) + kd + carry >= p else 0
        count += carry
        j += 1
    return count


def carry_count_rational(x: RationalLike, p: int, k: int) -> Union[int, float]:
    return carry_count(rational_expansion(x, p), k)


class CarryValuation:
    """``nu_p(A_k)`` by the carry formula, with digit expansions built once per prime."""

    def __init__(self, params: Params, p: int):
        self.params, self.p = params, p
        if isinstance(params, QuadraticHGParams):
            if p == 2 or params.discriminant % p == 0:
                raise BadPrimeError(f"bad prime {p} for {params}; use exact_valuation_oracle")
            if params.splitting(p) != 1:
                raise NotSplitError(f"p = {p} does not split in Q(sqrt({params.d}))")
            if not params.is_p_integral(p):
                raise BadPrimeError(f"parameters not {p}-integral; use exact_valuation_oracle")
            self.top = [QuadraticDigitStream(params.a, params.b, params.D, p, s) for s in (1, -1)]
            self.bottom = [rational_expansion(params.c - 1, p)]
            self.factorial_weight = 0
        else:
            if not params.is_p_integral(p):
                raise BadPrimeError(f"parameters not {p}-integral; use exact_valuation_oracle")
            self.top = [rational_expansion(a - 1, p) for a in params.alpha]
            self.bottom = [rational_expansion(b - 1, p) for b in params.beta]
            self.factorial_weight = params.m - params.n - 1

    def __call__(self, k: int) -> Union[int, float]:
        top = [carry_count(x, k) for x in self.top]
        if INF in top:
            return INF
        nu = sum(top) - sum(carry_count(x, k) for x in self.bottom)
        if self.factorial_weight:
            nu += self.factorial_weight * legendre_factorial_valuation(self.p, k)
        return nu


@lru_cache(maxsize=256)
def _valuator(params: Params, p: int) -> CarryValuation:
    return CarryValuation(params, p)


def coefficient_valuation(params: Params, p: int, k: int) -> Union[int, float]:
    """``nu_p(A_k) = sum c_p(alpha_i - 1, k) - sum c_p(beta_j - 1, k) + (m - n - 1) nu_p(k!)``."""
    if k < 0:
        raise ParameterError(f"k must be nonnegative, got {k}")
    return _valuator(params, p)(k)


# --- exact oracle ------------------------------------------------------------

def _count_residue(r: int, mod: int, k: int) -> int:
    """Number of ``0 <= i < k`` with ``i = r (mod mod)``, for ``0 <= r < mod``."""
    return 0 if r >= k else (k - 1 - r) // mod + 1


def _rising_valuation_by_root(root_mod, p: int, k: int) -> int:
    """``sum_{i<k} nu_p(x + i)`` for ``x`` in ``Z_p`` not a nonpositive integer below ``k``.

    ``root_mod(e)`` returns ``x mod p^e``.
    """
    total, e = 0, 1
    while True:
        mod = p**e
        r = -root_mod(e) % mod
        c = _count_residue(r, mod, k)
        if not c:
            return total
        total += c
        e += 1


def rising_factorial_valuation(x: RationalLike, p: int, k: int) -> Union[int, float]:
    """``nu_p((x)_k)`` without forming the product."""
    x = Fraction(x)
    if is_integer(x) and x <= 0 and k > -x:
        return INF
    if k == 0:
        return 0
    if x.denominator % p == 0:
        return k * valuation(x, p)
    return _rising_valuation_by_root(lambda e: rational_mod(x, p**e), p, k)


def _quadratic_numerator_valuation(params: QuadraticHGParams, p: int, k: int) -> int:
    if params.splitting(p) == 1 and p != 2 and params.is_p_integral(p):
        d, coeff = params.d, params.b * params.sqrt_coeff
        roots = []
        for s in (1, -1):
            roots.append(lambda e, s=s: (rational_mod(params.a, p**e)
                                         + s * rational_mod(coeff, p**e) * hensel_sqrt(d, p, e)) % p**e)
        return sum(_rising_valuation_by_root(r, p, k) for r in roots)
    # P mod p has no root in F_p: every factor P(-i) is a p-adic unit when p-integral
    if params.is_p_integral(p) and params.D.denominator % p and params.D.numerator % p:
        if all(rational_mod(params.min_poly(-i), p) for i in range(p)):
            return 0
    raise ParameterError(f"counting oracle unavailable at p = {p}; k = {k} too large for the direct route")


def exact_valuation_oracle(params: Params, p: int, k: int) -> Union[int, float]:
    """``nu_p(A_k)`` from the coefficient itself; ``inf`` for a zero coefficient."""
    if k < 0:
        raise ParameterError(f"k must be nonnegative, got {k}")
    if k <= DIRECT_LIMIT:
        a = coefficient(params, k)
        return INF if a == 0 else valuation(a, p)
    fact = legendre_factorial_valuation(p, k)
    if isinstance(params, QuadraticHGParams):
        return (_quadratic_numerator_valuation(params, p, k)
                - rising_factorial_valuation(params.c, p, k) - fact)
    top = [rising_factorial_valuation(a, p, k) for a in params.alpha]
    if INF in top:
        return INF
    return sum(top) - sum(rising_factorial_valuation(b, p, k) for b in params.beta) - fact


def valuation_profile(params: Params, p: int, count: int) -> list[Union[int, float]]:
    """Exact ``nu_p(A_k)`` for ``k < count``, accumulated factor by factor."""
    out: list[Union[int, float]] = []
    nu: Union[int, float] = 0
    for k in range(count):
        out.append(nu)
        if nu == INF:
            continue
        r = _ratio(params, k)
        nu = INF if r == 0 else nu + valuation(r, p)
    return out


def asymptotic_boundedness_shortcut(params: HypergeomParams) -> Regime:
    if params.m > params.n + 1:
        return Regime.ALL_PRIMES_BOUNDED
    if params.m < params.n + 1:
        return Regime.NO_PRIMES_BOUNDED
    return Regime.REGULAR_SINGULAR
