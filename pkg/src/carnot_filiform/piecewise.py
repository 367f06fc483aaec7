"""Exact piecewise polynomials on the real line.

Shear profiles live here, together with the iterated antiderivatives that
drive the shear map and the slope bounds that certify a Lipschitz constant.
All coefficients and breakpoints are rationals, so evaluation at a rational
point, integration, and bounding are exact.  Evaluating at a float returns a
float; nothing else in the module touches floating point.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from .scalars import Rational, Scalar, is_exact

__all__ = [
    "PiecewiseError",
    "Polynomial",
    "PiecewisePolynomial",
    "polynomial_profile",
    "profile_from_pieces",
    "profile_from_samples",
]


class PiecewiseError(ValueError):
    pass


def _as_fraction(x, where: str) -> Fraction:
    if not is_exact(x):
        raise PiecewiseError(f"{where}: exact rational required, got {type(x).__name__}")
    return Fraction(x)


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial, coefficients constant term first.

    ``coeffs`` is normalized (no trailing zeros); the zero polynomial is ().
    Build through :meth:`make` so normalization and exactness hold.
    """

    coeffs: Tuple[Fraction, ...]

    @classmethod
    def make(cls, coeffs: Iterable[Rational]) -> "Polynomial":
        cs = [_as_fraction(c, "coefficient") for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return cls(tuple(cs))

    def __hash__(self):
        # Fraction hashing is modular arithmetic; cache it, these objects
        # key several lru caches on hot paths
        h = getattr(self, "_hash", None)
        if h is None:
            h = hash(self.coeffs)
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: Scalar):
        if isinstance(x, float):
            acc = 0.0
            for c in reversed(self.coeffs):
                acc = acc * x + float(c)
            return acc
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial.make(x + y for x, y in zip(a, b))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not self.coeffs or not other.coeffs:
            return Polynomial(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))

    def antiderivative(self) -> "Polynomial":
        """Antiderivative with zero constant term."""
        if not self.coeffs:
            return Polynomial(())
        return Polynomial((Fraction(0),)
                          + tuple(c / (k + 1) for k, c in enumerate(self.coeffs)))

    def compose_affine(self, shift: Fraction, scale: Fraction) -> "Polynomial":
        """The polynomial u -> self(shift + scale*u)."""
        lin = Polynomial.make([shift, scale])
        acc = Polynomial(())
        for c in reversed(self.coeffs):
            acc = acc * lin + Polynomial.make([c])
        return acc

    def bound_on(self, lo: Fraction, hi: Fraction) -> Fraction:
        """Certified upper bound for |self| on [lo, hi].

        Bernstein coefficients of the restriction enclose the range, so their
        largest magnitude is a valid (not necessarily tight) bound.
        """
        if hi < lo:
            raise PiecewiseError("bound_on: empty interval")
        q = self.compose_affine(lo, hi - lo)
        d = q.degree
        if d <= 0:
            return abs(q.coeffs[0]) if q.coeffs else Fraction(0)
        best = Fraction(0)
        for k in range(d + 1):
            beta = Fraction(0)
            for j in range(min(k, d) + 1):
                if j < len(q.coeffs):
                    beta += Fraction(math.comb(k, j), math.comb(d, j)) * q.coeffs[j]
            best = max(best, abs(beta))
        return best


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Continuous piecewise polynomial defined on all of R.

    ``pieces[i]`` applies on [breakpoints[i-1], breakpoints[i]]; the first and
    last pieces extend to the unbounded tails, so len(pieces) is always
    len(breakpoints) + 1.  Continuity at every breakpoint is an invariant,
    checked on construction.  Slopes may still jump (that is the whole point
    of piecewise profiles); the one-sided helpers expose the jump.
    """

    breakpoints: Tuple[Fraction, ...]
    pieces: Tuple[Polynomial, ...]

    def __post_init__(self):
        if len(self.pieces) != len(self.breakpoints) + 1:
            raise PiecewiseError("need exactly one more piece than breakpoints")
        for u, v in zip(self.breakpoints, self.breakpoints[1:]):
            if not u < v:
                raise PiecewiseError("breakpoints must be strictly increasing")
        for i, x in enumerate(self.breakpoints):
            if self.pieces[i](x) != self.pieces[i + 1](x):
                raise PiecewiseError(f"discontinuous at breakpoint {x}")
        # float mirror of the breakpoints keeps float lookups off the
        # Fraction comparison path; evaluation is continuity-insensitive
        # to which side a borderline float lands on
        object.__setattr__(self, "_fbreaks",
                           tuple(float(b) for b in self.breakpoints))

    def __hash__(self):
        h = getattr(self, "_hash", None)
        if h is None:
            h = hash((self.breakpoints, self.pieces))
            object.__setattr__(self, "_hash", h)
        return h

    @classmethod
    def make(cls, breakpoints: Sequence[Rational],
             pieces: Sequence[Union[Polynomial, Sequence[Rational]]]) -> "PiecewisePolynomial":
        bps = tuple(_as_fraction(b, "breakpoint") for b in breakpoints)
        ps = tuple(p if isinstance(p, Polynomial) else Polynomial.make(p)
                   for p in pieces)
        return cls(bps, ps)

    def piece_at(self, x: Scalar) -> Polynomial:
        # bisect_right puts a breakpoint itself on the right piece; continuity
        # makes the choice invisible for values.
        if isinstance(x, float):
            return self.pieces[bisect_right(self._fbreaks, x)]
        return self.pieces[bisect_right(self.breakpoints, x)]

    def __call__(self, x: Scalar):
        return self.piece_at(x)(x)

    def __neg__(self) -> "PiecewisePolynomial":
        return PiecewisePolynomial(self.breakpoints, tuple(-p for p in self.pieces))

    def one_sided_slopes(self, x: Rational) -> Tuple[Fraction, Fraction]:
        """(left slope, right slope) at x; equal away from breakpoints."""
        xq = _as_fraction(x, "slope point")
        left = self.pieces[bisect_left(self.breakpoints, xq)]
        right = self.pieces[bisect_right(self.breakpoints, xq)]
        return left.derivative()(xq), right.derivative()(xq)

    def is_smooth_at(self, x: Rational) -> bool:
        a, b = self.one_sided_slopes(x)
        return a == b

    def slope_at(self, x: Rational) -> Fraction:
        a, b = self.one_sided_slopes(x)
        if a != b:
            raise PiecewiseError(f"slope undefined at breakpoint {x}: "
                                 f"one-sided slopes {a} and {b}")
        return a

    def slope_bound(self):
        """Certified bound for |slope| over all of R.

        Exact on tails of degree <= 1; Bernstein bound on interior pieces;
        math.inf when an unbounded tail makes the slope unbounded.
        """
        def tail_slope(p: Polynomial):
            if p.degree <= 0:
                return Fraction(0)
            if p.degree == 1:
                return abs(p.coeffs[1])
            return None

        if not self.breakpoints:
            s = tail_slope(self.pieces[0])
            return math.inf if s is None else s

        bound = Fraction(0)
        for p in (self.pieces[0], self.pieces[-1]):
            s = tail_slope(p)
            if s is None:
                return math.inf
            bound = max(bound, s)
        for i in range(1, len(self.pieces) - 1):
            lo, hi = self.breakpoints[i - 1], self.breakpoints[i]
            bound = max(bound, self.pieces[i].derivative().bound_on(lo, hi))
        return bound

    def antiderivative_from_zero(self) -> "PiecewisePolynomial":
        """The continuous antiderivative vanishing at 0."""
        raws = [p.antiderivative() for p in self.pieces]
        consts = [Fraction(0)] * len(raws)
        anchor = bisect_right(self.breakpoints, Fraction(0))
        consts[anchor] = -raws[anchor](Fraction(0))
        for i in range(anchor + 1, len(raws)):
            x = self.breakpoints[i - 1]
            consts[i] = raws[i - 1](x) + consts[i - 1] - raws[i](x)
        for i in range(anchor - 1, -1, -1):
            x = self.breakpoints[i]
            consts[i] = raws[i + 1](x) + consts[i + 1] - raws[i](x)
        pieces = tuple(raw + Polynomial.make([c]) for raw, c in zip(raws, consts))
        return PiecewisePolynomial(self.breakpoints, pieces)


def polynomial_profile(coeffs: Sequence[Rational]) -> PiecewisePolynomial:
    """A single polynomial viewed as a (breakpoint-free) profile."""
    return PiecewisePolynomial((), (Polynomial.make(coeffs),))


def profile_from_pieces(spans: Sequence[Tuple[Rational, Rational, Sequence[Rational]]]
                        ) -> PiecewisePolynomial:
    """Profile from contiguous (lo, hi, coeffs) spans, constant outside.

    Spans must be given in increasing order with hi of one span equal to lo of
    the next; the extension beyond the outermost breakpoints holds the
    boundary values, so the profile is bounded and globally Lipschitz whenever
    the interior pieces are.
    """
    if not spans:
        raise PiecewiseError("at least one span required")
    breakpoints = []
    core = []
    prev_hi = None
    for lo, hi, coeffs in spans:
        lo, hi = _as_fraction(lo, "span lo"), _as_fraction(hi, "span hi")
        if not lo < hi:
            raise PiecewiseError(f"empty span [{lo}, {hi}]")
        if prev_hi is not None and lo != prev_hi:
            raise PiecewiseError(f"spans must be contiguous: gap at {prev_hi}")
        if prev_hi is None:
            breakpoints.append(lo)
        breakpoints.append(hi)
        core.append(Polynomial.make(coeffs))
        prev_hi = hi
    left = Polynomial.make([core[0](breakpoints[0])])
    right = Polynomial.make([core[-1](breakpoints[-1])])
    return PiecewisePolynomial(tuple(breakpoints), (left, *core, right))


def profile_from_samples(xs: Sequence[Rational], ys: Sequence[Rational]
                         ) -> PiecewisePolynomial:
    """Piecewise-linear interpolant of sample points, constant outside.

    Float samples are accepted and converted exactly (binary floats are
    rationals), so the interpolant passes through the given values bit for
    bit and all downstream arithmetic stays exact.
    """
    if len(xs) != len(ys) or len(xs) < 2:
        raise PiecewiseError("need matching xs/ys with at least two samples")
    xq = [Fraction(x) for x in xs]
    yq = [Fraction(y) for y in ys]
    spans = []
    for (x0, y0), (x1, y1) in zip(zip(xq, yq), zip(xq[1:], yq[1:])):
        if not x0 < x1:
            raise PiecewiseError("sample xs must be strictly increasing")
        slope = (y1 - y0) / (x1 - x0)
        spans.append((x0, x1, [y0 - slope * x0, slope]))
    return profile_from_pieces(spans)
