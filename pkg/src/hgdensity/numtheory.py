"""Exact rational and modular arithmetic primitives.

Rationals are :class:`fractions.Fraction` throughout; they are always reduced
with a positive denominator, which is what makes "the denominator of a
parameter" and least common multiples of denominators well defined.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import InvalidClassError, ParameterError

Rational = Fraction
RationalLike = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:/(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"n/d"`` or ``"n"`` (optional leading ``-``) into a Fraction."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ParameterError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParameterError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def parse_rational_list(text: str) -> list[Fraction]:
    if not text.strip():
        return []
    return [parse_rational(part) for part in text.split(",")]


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fractional_part(x: RationalLike) -> Fraction:
    """Return ``x - floor(x)``, which lies in ``[0, 1)``."""
    x = Fraction(x)
    return x - math.floor(x)


def is_integer(x: RationalLike) -> bool:
    return Fraction(x).denominator == 1


@dataclass(frozen=True, order=True)
class CongruenceClass:
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ParameterError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            raise ParameterError(f"residue {self.residue} not reduced mod {self.modulus}")

    @classmethod
    def of(cls, u: int, modulus: int) -> "CongruenceClass":
        return cls(u % modulus, modulus)

    @property
    def is_unit(self) -> bool:
        return math.gcd(self.residue, self.modulus) == 1

    def __str__(self):
        return f"{self.residue} mod {self.modulus}"


# --- factorization -----------------------------------------------------------

@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``|n|`` by trial division, as ``((p, e), ...)``."""
    n = abs(n)
    if n == 0:
        raise ParameterError("cannot factor 0")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def euler_phi(m: int) -> int:
    if m < 1:
        raise ParameterError(f"euler_phi needs m >= 1, got {m}")
    result = m
    for p, _ in factorize(m):
        result -= result // p
    return result


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def primes_between(lo: int, hi: int) -> list[int]:
    return [p for p in primes_up_to(hi) if p >= lo]


# --- modular arithmetic ------------------------------------------------------

@lru_cache(maxsize=1024)
def unit_residues(m: int) -> tuple[int, ...]:
    """Residues of ``(Z/mZ)^x`` in increasing order; ``(0,)`` for ``m = 1``."""
    if m == 1:
        return (0,)
    return tuple(u for u in range(1, m) if math.gcd(u, m) == 1)


def multiplicative_order(u: int, m: int) -> int:
    """Smallest ``A >= 1`` with ``u**A == 1 (mod m)``."""
    if m < 1:
        raise ParameterError(f"modulus must be positive, got {m}")
    if m == 1:
        return 1
    u %= m
    if math.gcd(u, m) != 1:
        raise InvalidClassError(f"{u} is not a unit mod {m}")
    order, x = 1, u
    while x != 1:
        x = x * u % m
        order += 1
    return order


def cyclic_orbit(u: int, m: int) -> list[int]:
    """The powers ``u^0, u^1, ..., u^(A-1) mod m`` with ``A`` the order of ``u``."""
    if m == 1:
        return [0]
    out, x = [], 1
    while True:
        out.append(x)
        x = x * u % m
        if x == 1:
            return out


def mod_inverse(x: int, m: int) -> int:
    try:
        return pow(x, -1, m)
    except ValueError:
        raise InvalidClassError(f"{x} is not invertible mod {m}") from None


def rational_mod(x: RationalLike, m: int) -> int:
    """Image of a rational with denominator coprime to ``m`` in ``Z/mZ``."""
    x = Fraction(x)
    return x.numerator * mod_inverse(x.denominator, m) % m


# --- quadratic characters ----------------------------------------------------

def jacobi_symbol(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ParameterError(f"Jacobi symbol needs odd positive n, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker_symbol(d: int, u: int) -> int:
    """Kronecker symbol ``(d/u)``.

    For a fundamental discriminant ``d`` and a prime ``p``, the value is
    ``+1``, ``-1`` or ``0`` as ``p`` splits, is inert or ramifies in the
    quadratic field of discriminant ``d``; for ``u > 0`` it depends only on
    ``u mod |d|``.
    """
    if u == 0:
        return 1 if abs(d) == 1 else 0
    result = 1
    if u < 0:
        u = -u
        if d < 0:
            result = -result
    v = (u & -u).bit_length() - 1
    if v:
        if d % 2 == 0:
            return 0
        if v % 2 and d % 8 in (3, 5):
            result = -result
        u >>= v
    if u == 1:
        return result
    return result * jacobi_symbol(d, u)


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Write ``n = s**2 * d`` with ``d`` squarefree carrying the sign; return ``(s, d)``."""
    if n == 0:
        raise ParameterError("0 has no squarefree decomposition")
    s, d = 1, -1 if n < 0 else 1
    for p, e in factorize(n):
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return s, d


def squarefree_kernel(D: RationalLike) -> tuple[int, Fraction]:
    """Return ``(d, q)`` with ``d`` a squarefree integer and ``D = q**2 * d``.

    ``Q(sqrt(D)) = Q(sqrt(d))`` and ``sqrt(D) = q * sqrt(d)``.
    """
    D = Fraction(D)
    if D == 0:
        raise ParameterError("D must be nonzero")
    s, d = squarefree_decomposition(D.numerator * D.denominator)
    return d, Fraction(s, D.denominator)


def fundamental_discriminant(d: int) -> int:
    """Discriminant of ``Q(sqrt(d))`` for squarefree ``d != 0, 1``."""
    if d in (0, 1):
        raise ParameterError(f"{d} does not define a quadratic field")
    return d if d % 4 == 1 else 4 * d


# --- valuations --------------------------------------------------------------

def valuation(x: RationalLike, p: int) -> int:
    """``nu_p`` of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ParameterError("valuation of 0 is infinite")
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


def _int_valuation(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def digit_sum(k: int, p: int) -> int:
    s = 0
    while k:
        k, r = divmod(k, p)
        s += r
    return s


def legendre_factorial_valuation(p: int, k: int) -> int:
    """``nu_p(k!) = sum_{i>=1} floor(k / p^i)``."""
    if k < 0:
        raise ParameterError(f"k must be nonnegative, got {k}")
    total, q = 0, p
    while q <= k:
        total += k // q
        q *= p
    return total
