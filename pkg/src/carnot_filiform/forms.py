"""Second-layer forms, horizontal lifts and contour integrals on 2-step groups.

A polyline in the first layer lifts segment by segment: moving from first
layer position A by B adds (1/2)[A, B] to the second-layer component, so the
lift is a prefix sum and the closing defect of a closed polyline is half the
contour integral of the bracket form.  Everything is exact for rational
vertices; float vertices are allowed and simply produce float outputs (used
for polygonal approximations of smooth curves).

The Morera-style contour integral of a polynomial in (w, conj w) along a
closed polyline in the complex plane is also exact per segment: the
integrand restricted to a segment is a polynomial in the segment parameter,
integrated termwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

from .algebra import AlgebraError, Element, GradedAlgebra
from .scalars import GaussianRational, Scalar, is_exact

__all__ = [
    "CurveError",
    "Polyline",
    "LiftResult",
    "ComplexPolynomial",
    "omega",
    "alpha_integral",
    "horizontal_lift",
    "morera_defect",
]


class CurveError(ValueError):
    pass


def _require_step2(alg: GradedAlgebra) -> None:
    if alg.step != 2:
        raise AlgebraError(
            f"second-layer form machinery needs a 2-step algebra, "
            f"{alg.label} has step {alg.step}")


@dataclass(frozen=True)
class Polyline:
    """Vertices in the first layer; closed means first vertex = last vertex."""

    algebra: GradedAlgebra
    vertices: Tuple[tuple, ...]
    closed: bool = False

    def __post_init__(self):
        _require_step2(self.algebra)
        v1 = self.algebra.v1_dim
        verts = tuple(tuple(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2:
            raise CurveError("a polyline needs at least two vertices")
        for v in verts:
            if len(v) != v1:
                raise CurveError(f"vertices must have {v1} first-layer "
                                 f"coordinates, got {len(v)}")
        if self.closed and verts[0] != verts[-1]:
            raise CurveError("closed polyline must end at its first vertex")

    @property
    def segments(self) -> int:
        return len(self.vertices) - 1

    def reversed(self) -> "Polyline":
        return Polyline(self.algebra, tuple(reversed(self.vertices)), self.closed)


def _embed_v1(alg: GradedAlgebra, vec: Sequence[Scalar]) -> list:
    lo, hi = alg.layers[0]
    if len(vec) != hi - lo:
        raise CurveError(f"first-layer vector must have {hi - lo} coordinates")
    out = [0] * alg.dim
    for i, c in enumerate(vec):
        out[lo + i] = c
    return out


def omega(alg: GradedAlgebra, x, y) -> Element:
    """The second-layer-valued 2-form: the bracket of first-layer vectors."""
    _require_step2(alg)
    xc = x.coords if isinstance(x, Element) else _embed_v1(alg, x)
    yc = y.coords if isinstance(y, Element) else _embed_v1(alg, y)
    return Element(alg, tuple(alg.bracket_coords(xc, yc)))


def alpha_integral(alg: GradedAlgebra, c: Polyline) -> Element:
    """Contour integral of the bracket one-form along the polyline.

    On the segment from A to A + B the integrand [A + tB, B] is constant in
    t, so each segment contributes exactly [A, B].
    """
    alg.check_same(c.algebra)
    total = [0] * alg.dim
    for a, b in zip(c.vertices, c.vertices[1:]):
        ac = _embed_v1(alg, a)
        bc = _embed_v1(alg, [y - x for x, y in zip(a, b)])
        for k, v in enumerate(alg.bracket_coords(ac, bc)):
            total[k] = total[k] + v
    return Element(alg, tuple(total))


@dataclass(frozen=True)
class LiftResult:
    """Second-layer components of the horizontal lift at each vertex.

    ``defect`` is the second-layer change from first to last vertex; for a
    closed polyline it is half the contour integral, and the lift closes up
    exactly when it vanishes.
    """

    polyline: Polyline
    centers: Tuple[tuple, ...]
    defect: Element

    def points(self) -> list:
        """Full group elements of the lifted curve."""
        alg = self.polyline.algebra
        lo2, hi2 = alg.layers[1]
        out = []
        for vert, z in zip(self.polyline.vertices, self.centers):
            coords = _embed_v1(alg, vert)
            for i, c in enumerate(z):
                coords[lo2 + i] = c
            out.append(Element(alg, tuple(coords)))
        return out


def horizontal_lift(alg: GradedAlgebra, c: Polyline,
                    start_center: Optional[Sequence[Scalar]] = None) -> LiftResult:
    """Lift the first-layer polyline horizontally, starting at the given center."""
    alg.check_same(c.algebra)
    lo2, hi2 = alg.layers[1]
    width = hi2 - lo2
    if start_center is None:
        start = [Fraction(0)] * width
    else:
        start = list(start_center)
        if len(start) != width:
            raise CurveError(f"start center needs {width} second-layer "
                             f"coordinates")
    centers = [tuple(start)]
    current = start
    half = Fraction(1, 2)
    for a, b in zip(c.vertices, c.vertices[1:]):
        ac = _embed_v1(alg, a)
        bc = _embed_v1(alg, [y - x for x, y in zip(a, b)])
        step = alg.bracket_coords(ac, bc)[lo2:hi2]
        current = [z + half * s for z, s in zip(current, step)]
        centers.append(tuple(current))
    defect_coords = [0] * alg.dim
    for i in range(width):
        defect_coords[lo2 + i] = centers[-1][i] - centers[0][i]
    return LiftResult(c, tuple(centers), Element(alg, tuple(defect_coords)))


# === contour integrals in the complex plane =============================

def _as_gaussian(z, where: str) -> GaussianRational:
    if isinstance(z, GaussianRational):
        return z
    if isinstance(z, (tuple, list)) and len(z) == 2:
        re, im = z
        if is_exact(re) and is_exact(im):
            return GaussianRational.of(re, im)
    if is_exact(z):
        return GaussianRational.of(z)
    raise CurveError(f"{where}: exact complex value required, got {z!r}")


@dataclass(frozen=True)
class ComplexPolynomial:
    """Polynomial in w and conj(w) with Gaussian rational coefficients.

    ``terms`` maps exponent pairs (a, b) to the coefficient of w^a conj(w)^b.
    """

    terms: Tuple[Tuple[int, int, GaussianRational], ...]

    @classmethod
    def make(cls, terms) -> "ComplexPolynomial":
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = [((a, b), c) for a, b, c in terms]
        merged = {}
        for (a, b), c in items:
            if not (isinstance(a, int) and isinstance(b, int)) or a < 0 or b < 0:
                raise CurveError(f"exponents must be non-negative integers, "
                                 f"got ({a}, {b})")
            g = _as_gaussian(c, "coefficient")
            prev = merged.get((a, b))
            merged[(a, b)] = g if prev is None else prev + g
        norm = tuple((a, b, c) for (a, b), c in sorted(merged.items())
                     if not c.is_zero())
        return cls(norm)

    def __call__(self, w):
        if isinstance(w, GaussianRational):
            acc = GaussianRational.of(0)
            for a, b, c in self.terms:
                acc = acc + c * w ** a * w.conjugate() ** b
            return acc
        z = complex(w)
        acc = 0j
        for a, b, c in self.terms:
            acc += complex(c) * z ** a * z.conjugate() ** b
        return acc


def _segment_integral(g: ComplexPolynomial, a: GaussianRational,
                      d: GaussianRational) -> GaussianRational:
    """Exact integral of g along w(t) = a + t d, t in [0, 1], times dw."""
    abar, dbar = a.conjugate(), d.conjugate()
    total = GaussianRational.of(0)
    for pa, pb, coeff in g.terms:
        for i in range(pa + 1):
            for j in range(pb + 1):
                piece = (coeff
                         * GaussianRational.of(Fraction(math.comb(pa, i)
                                                        * math.comb(pb, j),
                                                        i + j + 1))
                         * a ** (pa - i) * d ** i
                         * abar ** (pb - j) * dbar ** j)
                total = total + piece
    return total * d


def morera_defect(g: ComplexPolynomial,
                  vertices: Sequence) -> GaussianRational:
    """Exact contour integral of g(w) dw along a closed polyline in C."""
    pts = [_as_gaussian(v, "vertex") for v in vertices]
    if len(pts) < 2:
        raise CurveError("a contour needs at least two vertices")
    if not (pts[0] - pts[-1]).is_zero():
        raise CurveError("contour integral requires a closed polyline "
                         "(first vertex must equal last)")
    total = GaussianRational.of(0)
    for a, b in zip(pts, pts[1:]):
        total = total + _segment_integral(g, a, b - a)
    return total
