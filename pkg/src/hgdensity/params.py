"""Hypergeometric parameter sets: rational ``mFn`` and quadratic ``2F1``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ParameterError
from .numtheory import (
    RationalLike,
    fractional_part,
    fundamental_discriminant,
    is_integer,
    kronecker_symbol,
    squarefree_kernel,
    valuation,
)


def normalize_unit_interval(x: Fraction) -> Fraction:
    """Representative of ``x mod Z`` in ``(0, 1]``."""
    f = fractional_part(x)
    return f if f else Fraction(1)


def _cancel(alpha: list[Fraction], beta: list[Fraction]):
    alpha = list(alpha)
    kept, removed = [], []
    for b in beta:
        if b in alpha:
            alpha.remove(b)
            removed.append(b)
        else:
            kept.append(b)
    return alpha, kept, removed


@dataclass(frozen=True)
class HypergeomParams:
    """Parameters of ``mFn(alpha; beta; z)``; equal alpha/beta pairs are cancelled."""

    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    cancelled: tuple[Fraction, ...] = field(default=(), compare=False)

    def __post_init__(self):
        alpha = [Fraction(x) for x in self.alpha]
        beta = [Fraction(x) for x in self.beta]
        for b in beta:
            if is_integer(b) and b <= 0:
                raise ParameterError(f"denominator parameter {b} is a nonpositive integer")
        new_alpha, new_beta, removed = _cancel(alpha, beta)
        object.__setattr__(self, "alpha", tuple(new_alpha))
        object.__setattr__(self, "beta", tuple(new_beta))
        if removed:
            object.__setattr__(self, "cancelled", tuple(self.cancelled) + tuple(removed))

    @classmethod
    def of(cls, alpha: Iterable[RationalLike], beta: Iterable[RationalLike]) -> "HypergeomParams":
        return cls(tuple(Fraction(a) for a in alpha), tuple(Fraction(b) for b in beta))

    @property
    def m(self) -> int:
        return len(self.alpha)

    @property
    def n(self) -> int:
        return len(self.beta)

    @property
    def terminating(self) -> bool:
        return any(is_integer(a) and a <= 0 for a in self.alpha)

    def normalized(self) -> "HypergeomParams":
        """Parameters reduced mod ``Z`` into ``(0, 1]``, re-cancelled."""
        return HypergeomParams(tuple(normalize_unit_interval(a) for a in self.alpha),
                               tuple(normalize_unit_interval(b) for b in self.beta))

    @property
    def modulus(self) -> int:
        """Least common multiple of the parameter denominators."""
        return math.lcm(1, *(x.denominator for x in self.alpha + self.beta))

    def is_p_integral(self, p: int) -> bool:
        return all(x.denominator % p for x in self.alpha + self.beta)

    def is_good_prime(self, p: int) -> bool:
        """All shifted parameters ``x - 1`` are units (zero ones aside) and no ``alpha_i - beta_j`` is divisible by ``p``."""
        if not self.is_p_integral(p):
            return False
        for x in self.alpha + self.beta:
            if x != 1 and valuation(x - 1, p) != 0:
                return False
        return all(valuation(a - b, p) == 0 for a in self.alpha for b in self.beta)

    def good_prime_threshold(self) -> int:
        """Primes above this are good for the normalized parameters and obey the class rule."""
        norm = self.normalized()
        diffs = [abs(a - b) for a in norm.alpha for b in norm.beta]
        inv = max((math.ceil(1 / d) for d in diffs), default=1)
        return max(norm.modulus, inv)

    def __str__(self):
        fmt = lambda xs: ",".join(str(x) for x in xs)
        return f"{self.m}F{self.n}({fmt(self.alpha)}; {fmt(self.beta)})"


@dataclass(frozen=True)
class QuadraticHGParams:
    """``2F1(a + b sqrt(D), a - b sqrt(D); c; z)`` with ``D`` a nonsquare rational."""

    a: Fraction
    b: Fraction
    c: Fraction
    D: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c", "D"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.b == 0:
            raise ParameterError("b = 0 gives rational parameters; use rational_density")
        if is_integer(self.c) and self.c <= 0:
            raise ParameterError(f"c = {self.c} is a nonpositive integer")
        d, _ = squarefree_kernel(self.D)
        if d == 1:
            raise ParameterError(f"D = {self.D} is a perfect square: rational parameters; use rational_density")

    @property
    def d(self) -> int:
        """Squarefree kernel: ``Q(sqrt(D)) = Q(sqrt(d))``."""
        return squarefree_kernel(self.D)[0]

    @property
    def sqrt_coeff(self) -> Fraction:
        """``q`` with ``sqrt(D) = q sqrt(d)``."""
        return squarefree_kernel(self.D)[1]

    @property
    def discriminant(self) -> int:
        return fundamental_discriminant(self.d)

    @property
    def trace_integral(self) -> bool:
        return is_integer(2 * self.a)

    @property
    def trace_fraction(self) -> Fraction:
        return normalize_unit_interval(2 * self.a)

    @property
    def a_normalized(self) -> Fraction:
        return Fraction(1, 2) if self.trace_integral else fractional_part(self.a)

    @property
    def c_normalized(self) -> Fraction:
        return normalize_unit_interval(self.c)

    def min_poly(self, x: RationalLike) -> Fraction:
        """``P(x) = x^2 - 2ax + a^2 - b^2 D``, the minimal polynomial of ``a + b sqrt(D)``."""
        x = Fraction(x)
        return x * x - 2 * self.a * x + self.a**2 - self.b**2 * self.D

    def splitting(self, p: int) -> int:
        """``+1`` split, ``-1`` inert, ``0`` ramified."""
        return kronecker_symbol(self.discriminant, p)

    def is_p_integral(self, p: int) -> bool:
        coeff = self.b * self.sqrt_coeff
        return all(x.denominator % p for x in (self.a, coeff, self.c))

    def is_good_prime(self, p: int) -> bool:
        """Odd, unramified, away from parameter denominators and from the norms of ``a +- b sqrt(D) - 1`` and ``a +- b sqrt(D) - c``."""
        if p == 2 or not self.is_p_integral(p):
            return False
        D = self.D
        if D.numerator % p == 0 or D.denominator % p == 0 or self.discriminant % p == 0:
            return False
        bad = [(self.a - 1) ** 2 - self.b**2 * D, (self.a - self.c) ** 2 - self.b**2 * D]
        if self.c != 1:
            bad.append(self.c - 1)
        return all(x != 0 and valuation(x, p) == 0 for x in bad)

    def __str__(self):
        return f"2F1({self.a} +- {self.b}*sqrt({self.D}); {self.c})"


def as_params(alpha: Sequence[RationalLike], beta: Sequence[RationalLike]) -> HypergeomParams:
    return HypergeomParams.of(alpha, beta)
