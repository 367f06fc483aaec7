"""Tangent-map estimation by dilated difference quotients.

For a map F and base point p the scale-t quotient in direction v is

    delta_t(v) = dilate(1/t, F(p)^(-1) * F(p * dilate(t, v)))

computed in exact rational arithmetic for rational scales, so the only
numerics in the whole estimator is the extrapolation *to* scale zero, and
even that is exact: the per-coordinate limit is Neville extrapolation of the
quotient coordinates through the given scales, evaluated at t = 0.

Residuals compare each quotient against the extrapolated limit in the
homogeneous distance, normalized by the direction's norm.  Non-decreasing
residuals and shear profiles with a slope jump at the base point are
reported as flags instead of being silently extrapolated over.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from .algebra import AlgebraError, Element, GradedAlgebra
from .bch import group_inverse, group_product
from .maps import (GradedAutoParams, Rejection, Shear, _apply_atom, as_map,
                   apply_map, classify_graded_automorphism)
from .metric import homogeneous_distance, homogeneous_norm
from .scalars import is_exact, require_exact

__all__ = [
    "DEFAULT_SCALES",
    "PansuEstimate",
    "dilation_quotient",
    "pansu_differential_estimate",
]

DEFAULT_SCALES = (Fraction(1, 10), Fraction(1, 100),
                  Fraction(1, 1000), Fraction(1, 10000))

# monotonicity is only meaningful above roundoff in the float residuals
RESIDUAL_FLOOR = 1e-12


def dilation_quotient(alg: GradedAlgebra, m, p: Element, v: Element,
                      t: Fraction) -> Element:
    """The scale-t difference quotient of the map at p in direction v."""
    t = Fraction(t)
    if t <= 0:
        raise AlgebraError(f"quotient scale must be positive, got {t}")
    fp = apply_map(alg, m, p)
    fq = apply_map(alg, m, group_product(alg, p, alg.dilate(t, v)))
    diff = group_product(alg, group_inverse(fp), fq)
    return alg.dilate(1 / t, diff)


def _neville_at_zero(nodes: Sequence[Fraction], values: Sequence[Fraction]) -> Fraction:
    """Polynomial through (nodes, values) evaluated at 0, exactly."""
    p = list(values)
    n = len(p)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            # P_{i,j}(0) from the two order-(j-1) interpolants
            p[i] = (nodes[i] * p[i - 1] - nodes[i - j] * p[i]) / (nodes[i] - nodes[i - j])
    return p[-1]


def _shear_jump_flags(alg: GradedAlgebra, m, p: Element) -> list:
    flags = []
    q = p
    for atom in as_map(m).atoms:
        if isinstance(atom, Shear):
            x1 = Fraction(q.coords[0])
            if not atom.profile.is_smooth_at(x1):
                flags.append(f"shear-profile-slope-jump at x_1 = {x1}")
        q = _apply_atom(alg, atom, q)
    return flags


@dataclass(frozen=True)
class PansuEstimate:
    """Quotients, extrapolated limits and diagnostics at one base point.

    ``quotients[d][k]`` is the exact scale-k quotient in direction d.
    ``limits`` and ``matrix`` are None when a flag forbids extrapolation;
    the matrix is only assembled when the directions are the full basis.
    """

    algebra: GradedAlgebra
    base_point: Element
    scales: Tuple[Fraction, ...]
    directions: Tuple[Element, ...]
    quotients: Tuple[Tuple[Element, ...], ...]
    limits: Optional[Tuple[Element, ...]]
    matrix: Optional[tuple]
    residuals: Tuple[Tuple[float, ...], ...]
    flags: Tuple[str, ...]
    classification: Optional[Union[GradedAutoParams, Rejection]]
    classification_error: Optional[float]


def _snap_matrix(matrix, max_denominator: int = 1000):
    snapped = []
    err = Fraction(0)
    for row in matrix:
        out = []
        for c in row:
            s = Fraction(c).limit_denominator(max_denominator)
            err = max(err, abs(s - Fraction(c)))
            out.append(s)
        snapped.append(tuple(out))
    return tuple(snapped), float(err)


def pansu_differential_estimate(alg: GradedAlgebra, m, p: Element, *,
                                scales: Optional[Sequence] = None,
                                directions: Optional[Sequence[Element]] = None,
                                classify_tol: float = 1e-6) -> PansuEstimate:
    """Estimate the tangent map of ``m`` at ``p`` across the given scales.

    Scales must be positive, strictly decreasing rationals; directions
    default to the full basis, which is what enables the matrix assembly and
    its classification attempt.
    """
    alg.check_same(p.algebra)
    require_exact(p.coords, "tangent-map base point")
    if scales is None:
        scales = DEFAULT_SCALES
    tlist = tuple(Fraction(t) for t in scales)
    if len(tlist) < 2:
        raise AlgebraError("need at least two scales to extrapolate")
    if any(t <= 0 for t in tlist) or any(a <= b for a, b in zip(tlist, tlist[1:])):
        raise AlgebraError("scales must be positive and strictly decreasing")
    if directions is None:
        dirs = tuple(alg.basis(i) for i in range(alg.dim))
        is_basis = True
    else:
        dirs = tuple(dirs_el for dirs_el in directions)
        for d in dirs:
            alg.check_same(d.algebra)
            require_exact(d.coords, "quotient direction")
            if d.is_zero():
                raise AlgebraError("zero direction has no quotient")
        is_basis = (len(dirs) == alg.dim
                    and all(d.coords == alg.basis(i).coords
                            for i, d in enumerate(dirs)))

    flags = _shear_jump_flags(alg, m, p)
    quotients = tuple(
        tuple(dilation_quotient(alg, m, p, v, t) for t in tlist)
        for v in dirs)

    if flags:
        return PansuEstimate(alg, p, tlist, dirs, quotients,
                             None, None, (), tuple(flags), None, None)

    limits = []
    for qrow in quotients:
        coords = tuple(
            _neville_at_zero(tlist, [q.coords[i] for q in qrow])
            for i in range(alg.dim))
        limits.append(Element(alg, coords))
    limits = tuple(limits)

    residuals = []
    for v, qrow, lim in zip(dirs, quotients, limits):
        scale0 = homogeneous_norm(alg, v)
        row = tuple(homogeneous_distance(alg, q, lim) / scale0 for q in qrow)
        residuals.append(row)
        bad = [k for k in range(len(row) - 1)
               if row[k + 1] > row[k] + RESIDUAL_FLOOR]
        if bad:
            flags.append("residuals-not-decreasing for direction "
                         f"{tuple(float(c) for c in v.coords)} at scale "
                         f"{tlist[bad[0] + 1]}")
    residuals = tuple(residuals)

    matrix = None
    classification = None
    class_err = None
    if is_basis:
        matrix = tuple(tuple(limits[c].coords[r] for c in range(alg.dim))
                       for r in range(alg.dim))
        snapped, err = _snap_matrix(matrix)
        if err <= classify_tol:
            try:
                classification = classify_graded_automorphism(alg, snapped)
                class_err = err
            except AlgebraError:
                classification = None
        else:
            classification = Rejection(
                "tolerance",
                f"matrix entries are {err:.3g} away from low rationals, "
                f"beyond the {classify_tol:g} classification tolerance")
            class_err = err

    return PansuEstimate(alg, p, tlist, dirs, quotients, limits, matrix,
                         residuals, tuple(flags), classification, class_err)
