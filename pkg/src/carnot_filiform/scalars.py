"""Exact scalar helpers: rationals, Gaussian rationals, parsing.

Exact coordinates are `int` or `fractions.Fraction`.  float64 is tolerated only
on the metric / optimizer / Pansu estimation paths; operations that must be
exact call :func:`require_exact` at their boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Rational = Union[int, Fraction]
Scalar = Union[int, Fraction, float]


class ExactScalarRequired(TypeError):
    """Raised when a float sneaks into an exact-only operation."""


def is_exact(x: Scalar) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def require_exact(coords: Iterable[Scalar], where: str) -> None:
    for c in coords:
        if not is_exact(c):
            raise ExactScalarRequired(
                f"{where} requires exact rational scalars, got {type(c).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q', integer, or decimal strings to an exact Fraction."""
    return Fraction(text.strip())


def format_rational(x: Rational) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def rational_sqrt(x: Rational):
    """Exact square root of a rational, or None if it is not a rational square."""
    f = Fraction(x)
    if f < 0:
        return None
    ns = math.isqrt(f.numerator)
    ds = math.isqrt(f.denominator)
    if ns * ns == f.numerator and ds * ds == f.denominator:
        return Fraction(ns, ds)
    return None


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex scalar re + im*i with rational parts."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(re: Scalar, im: Scalar = 0) -> "GaussianRational":
        return GaussianRational(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re * other.re - self.im * other.im,
                                    self.re * other.im + self.im * other.re)
        return GaussianRational(self.re * other, self.im * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            d = other.re * other.re + other.im * other.im
            if d == 0:
                raise ZeroDivisionError("division by zero Gaussian rational")
            return self * GaussianRational(other.re / d, -other.im / d)
        return GaussianRational(self.re / other, self.im / other)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __pow__(self, k: int) -> "GaussianRational":
        out = GaussianRational.of(1)
        base = self
        if k < 0:
            base = GaussianRational.of(1) / self
            k = -k
        for _ in range(k):
            out = out * base
        return out

    def inverse(self) -> "GaussianRational":
        return GaussianRational.of(1) / self

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        return f"{format_rational(self.re)}{'+' if self.im >= 0 else '-'}{format_rational(abs(self.im))}i"
