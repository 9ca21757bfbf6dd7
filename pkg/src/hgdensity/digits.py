"""p-adic digit expansions.

Rationals in ``Z_p`` have eventually periodic expansions, computed here in
closed form.  Quadratic irrationalities ``a + b*sigma(sqrt(D)) - 1`` at a
split prime are streamed digit by digit from a Hensel-lifted square root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Protocol

from .errors import BadPrimeError, NotPIntegralError, NotSplitError, ParameterError
from .numtheory import (
    RationalLike,
    fractional_part,
    kronecker_symbol,
    mod_inverse,
    multiplicative_order,
    rational_mod,
    squarefree_kernel,
)


class DigitSource(Protocol):
    p: int

    def digit(self, j: int) -> int: ...


@dataclass(frozen=True)
class RationalExpansion:
    """Eventually periodic base-``p`` digits, least significant first."""

    p: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise ParameterError("period must be nonempty")

    def digit(self, j: int) -> int:
        if j < 0:
            raise ParameterError(f"digit index must be nonnegative, got {j}")
        if j < len(self.preperiod):
            return self.preperiod[j]
        return self.period[(j - len(self.preperiod)) % len(self.period)]

    def value(self) -> Fraction:
        p, pre, per = self.p, self.preperiod, self.period
        head = sum(d * p**i for i, d in enumerate(pre))
        cycle = sum(d * p**i for i, d in enumerate(per))
        return head + Fraction(p ** len(pre) * cycle, 1 - p ** len(per))

    @property
    def is_purely_periodic(self) -> bool:
        return not self.preperiod

    @property
    def has_infinite_tail(self) -> bool:
        """True for negative integers, whose expansion ends in all ``p-1`` digits."""
        return self.period == (self.p - 1,)

    def __str__(self):
        return format_expansion(self)


def format_expansion(x: RationalExpansion) -> str:
    pre = ",".join(map(str, x.preperiod))
    per = ",".join(map(str, x.period))
    return f"{pre}|{per}"


def rational_expansion(x: RationalLike, p: int) -> RationalExpansion:
    x = Fraction(x)
    v = x.denominator
    if v % p == 0:
        raise NotPIntegralError(f"{x} is not {p}-integral")
    inv = mod_inverse(v, p)
    n = x.numerator
    seen: dict[int, int] = {}
    digits: list[int] = []
    while n not in seen:
        seen[n] = len(digits)
        d = n * inv % p
        digits.append(d)
        n = (n - d * v) // p
    start = seen[n]
    return RationalExpansion(p, tuple(digits[:start]), tuple(digits[start:]))


def digit_at(x: DigitSource, j: int) -> int:
    return x.digit(j)


def digit_by_formula(a: Fraction, p: int, j: int) -> int:
    """Digit ``j`` of ``a - 1`` for ``0 < a < 1`` as ``floor({-p^(M-1-j) a} p)``.

    ``M`` is the order of ``p`` modulo the denominator of ``a``; valid for
    ``0 <= j < M``.
    """
    order = multiplicative_order(p, a.denominator)
    return math.floor(fractional_part(-(p ** (order - 1 - j)) * a) * p)


def nonzero_digit_guarantee(a: Fraction, p: int) -> bool:
    """Whether ``p`` exceeds the denominator of ``a``, forcing every digit of ``a-1`` to be nonzero."""
    a = Fraction(a)
    if not 0 < a < 1:
        raise ParameterError(f"expected 0 < a < 1, got {a}")
    if a.denominator % p == 0:
        raise NotPIntegralError(f"{a} is not {p}-integral")
    return p > a.denominator


# --- square roots ------------------------------------------------------------

def _sqrt_mod_prime(n: int, p: int) -> int:
    """Tonelli-Shanks; ``n`` a nonzero quadratic residue mod odd ``p``."""
    n %= p
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _check_sqrt_prime(D: int, p: int) -> None:
    if p == 2 or D % p == 0:
        raise BadPrimeError(f"bad prime {p} for sqrt({D})")
    if pow(D % p, (p - 1) // 2, p) != 1:
        raise NotSplitError(f"p does not split: {D} is not a square mod {p}")


def _lift_root(r: int, D: int, p: int, have: int, want: int) -> int:
    """Newton-lift a root of ``x^2 = D`` from precision ``p^have`` to ``p^want``."""
    while have < want:
        have = min(2 * have, want)
        mod = p**have
        r = (r - (r * r - D) * mod_inverse(2 * r, mod)) % mod
    return r % p**want


def hensel_sqrt(D: int, p: int, k: int) -> int:
    """Square root of ``D`` mod ``p^k`` whose residue mod ``p`` lies in ``(0, p/2)``."""
    if k < 1:
        raise ParameterError(f"precision must be >= 1, got {k}")
    _check_sqrt_prime(D, p)
    r0 = _sqrt_mod_prime(D, p)
    r0 = min(r0, p - r0)
    return _lift_root(r0, D, p, 1, k)


# --- quadratic digit streams -------------------------------------------------

@dataclass
class QuadraticDigitStream:
    """Digits of ``a + b*sigma(sqrt(D)) - 1`` in ``Z_p``.

    ``embedding`` is ``+1`` for the canonical root returned by
    :func:`hensel_sqrt` and ``-1`` for its negation.  Not thread safe: one
    consumer per stream.
    """

    a: Fraction
    b: Fraction
    D: Fraction
    p: int
    embedding: int = 1
    d: int = field(init=False)
    coeff: Fraction = field(init=False)
    _k: int = field(init=False, default=0, repr=False)
    _root: int = field(init=False, default=0, repr=False)
    _digits: list[int] = field(init=False, default_factory=list, repr=False)
    _cursor: int = field(init=False, default=0, repr=False)

    def __post_init__(self):
        self.a, self.b, self.D = Fraction(self.a), Fraction(self.b), Fraction(self.D)
        if self.embedding not in (1, -1):
            raise ParameterError(f"embedding must be +1 or -1, got {self.embedding}")
        p = self.p
        if self.b == 0:
            self.d, self.coeff = 1, Fraction(0)
        else:
            self.d, q = squarefree_kernel(self.D)
            self.coeff = self.b * q
            if self.d == 1:
                raise ParameterError(f"D = {self.D} is a perfect square")
            if p == 2 or self.d % p == 0:
                raise BadPrimeError(f"bad prime {p} for Q(sqrt({self.d}))")
            if kronecker_symbol(self.d, p) != 1:
                raise NotSplitError(f"p = {p} does not split in Q(sqrt({self.d}))")
            _check_sqrt_prime(self.d, p)
        for x in (self.a, self.coeff):
            if x.denominator % p == 0:
                raise BadPrimeError(f"bad prime {p}: {x} is not {p}-integral")
        if self.coeff:
            r0 = _sqrt_mod_prime(self.d, p)
            self._root = min(r0, p - r0)
            self._k = 1

    def residue(self, k: int) -> int:
        """The value modulo ``p^k``."""
        mod = self.p**k
        base = rational_mod(self.a - 1, mod)
        if not self.coeff:
            return base
        if k > self._k:
            self._root = _lift_root(self._root, self.d, self.p, self._k, k)
            self._k = k
        root = self._root % mod
        return (base + self.embedding * rational_mod(self.coeff, mod) * root) % mod

    def _extend(self, n: int) -> None:
        have = len(self._digits)
        want = max(n + 1, 2 * have, 16)
        t = self.residue(want) // self.p**have
        for _ in range(want - have):
            t, d = divmod(t, self.p)
            self._digits.append(d)

    def digit(self, j: int) -> int:
        if j < 0:
            raise ParameterError(f"digit index must be nonnegative, got {j}")
        if j >= len(self._digits):
            self._extend(j)
        return self._digits[j]

    def digits(self, count: int) -> list[int]:
        if count > len(self._digits):
            self._extend(count - 1)
        return self._digits[:count]

    def __iter__(self) -> Iterator[int]:
        return self

    def __next__(self) -> int:
        d = self.digit(self._cursor)
        self._cursor += 1
        return d


def quadratic_digit_stream(a: RationalLike, b: RationalLike, D: RationalLike, p: int,
                           embedding: int = 1) -> QuadraticDigitStream:
    return QuadraticDigitStream(Fraction(a), Fraction(b), Fraction(D), p, embedding)


@dataclass(frozen=True)
class WindowStatistics:
    ratio: Fraction
    hits: tuple[int, ...]
    count: int


def digit_window_statistics(stream: DigitSource, r: int, s: int, u: RationalLike,
                            v: RationalLike, count: int) -> WindowStatistics:
    """Fraction of digits at ``s, s+r, ..., s+(count-1)r`` inside ``(u(p-1), v(p-1))``.

    This is evidence about digit distribution only; it proves nothing about
    the behaviour of the full digit sequence.
    """
    u, v = Fraction(u), Fraction(v)
    if not 0 <= u < v <= 1:
        raise ParameterError(f"need 0 <= u < v <= 1, got u={u}, v={v}")
    if r < 1 or s < 0 or count < 1:
        raise ParameterError("need r >= 1, s >= 0, count >= 1")
    lo, hi = u * (stream.p - 1), v * (stream.p - 1)
    hits = []
    for i in range(count):
        j = s + i * r
        if lo < stream.digit(j) < hi:
            hits.append(j)
    return WindowStatistics(Fraction(len(hits), count), tuple(hits), count)
