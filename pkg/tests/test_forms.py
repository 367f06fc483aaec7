"""Contour forms, lifts, and the complex segment integral.

The exact contour integral is cross-checked with a float midpoint rule
implemented here from scratch.
"""

import random
from fractions import Fraction

import pytest

from carnot_filiform import (ComplexPolynomial, CurveError, GaussianRational,
                             Polyline, algebra_by_label, alpha_integral,
                             horizontal_lift, morera_defect, omega)


def unit_square(alg):
    return Polyline(alg, ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
                          (Fraction(1), Fraction(1)), (Fraction(0), Fraction(1)),
                          (Fraction(0), Fraction(0))), closed=True)


def test_polyline_validation(fr2, fr3):
    with pytest.raises(CurveError):
        Polyline(fr2, ((Fraction(0), Fraction(0)),))
    with pytest.raises(CurveError):
        Polyline(fr2, ((Fraction(0), Fraction(0)), (Fraction(1),)))
    with pytest.raises(CurveError):
        Polyline(fr2, ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))),
                 closed=True)
    from carnot_filiform import AlgebraError
    with pytest.raises(AlgebraError):         # lift theory is step-2 only
        Polyline(fr3, ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))))


def test_omega_antisymmetric(hc1, rng):
    for _ in range(10):
        x = [Fraction(rng.randint(-5, 5)) for _ in range(hc1.v1_dim)]
        y = [Fraction(rng.randint(-5, 5)) for _ in range(hc1.v1_dim)]
        assert omega(hc1, x, y).coords == \
            tuple(-c for c in omega(hc1, y, x).coords)
        assert not any(omega(hc1, x, x).coords)


def test_alpha_unit_square(fr2):
    got = alpha_integral(fr2, unit_square(fr2))
    assert got.coords == (Fraction(0), Fraction(0), Fraction(2))


def test_alpha_reversal_negates(fr2):
    sq = unit_square(fr2)
    a = alpha_integral(fr2, sq)
    b = alpha_integral(fr2, sq.reversed())
    assert a.coords == tuple(-c for c in b.coords)


def test_lift_defect_is_half_alpha(hc1, rng):
    for _ in range(15):
        verts = [tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                       for _ in range(hc1.v1_dim)) for _ in range(5)]
        verts.append(verts[0])
        c = Polyline(hc1, tuple(verts), closed=True)
        lift = horizontal_lift(hc1, c)
        half = alpha_integral(hc1, c)
        assert lift.defect.coords == \
            tuple(Fraction(1, 2) * v for v in half.coords)


def test_lift_out_and_back_closes(fr2):
    c = Polyline(fr2, ((Fraction(0), Fraction(0)), (Fraction(3), Fraction(1)),
                       (Fraction(0), Fraction(0))), closed=True)
    lift = horizontal_lift(fr2, c)
    assert not any(lift.defect.coords)


def test_lift_start_center_shifts(fr2):
    sq = unit_square(fr2)
    base = horizontal_lift(fr2, sq)
    moved = horizontal_lift(fr2, sq, start_center=[Fraction(5)])
    for a, b in zip(base.centers, moved.centers):
        assert b[0] - a[0] == Fraction(5)
    assert moved.defect.coords == base.defect.coords


def test_lift_points_embed(fr2):
    sq = unit_square(fr2)
    pts = horizontal_lift(fr2, sq).points()
    assert len(pts) == 5
    assert pts[0].coords == fr2.zero().coords
    assert pts[-1].coords == (Fraction(0), Fraction(0), Fraction(1))


def test_gaussian_rational_field_ops():
    i = GaussianRational.of(Fraction(0), Fraction(1))
    z = GaussianRational.of(Fraction(3), Fraction(-2))
    assert (i * i).re == Fraction(-1)
    assert (z * z.inverse()).re == Fraction(1)
    assert (z * z.inverse()).im == Fraction(0)
    assert z.conjugate().im == Fraction(2)
    assert (z ** 3) == z * z * z
    assert complex(z) == 3 - 2j
    assert (z / z).re == Fraction(1)


def test_complex_polynomial_eval_consistency():
    g = ComplexPolynomial.make({(2, 1): GaussianRational.of(Fraction(1, 3)),
                                (0, 0): GaussianRational.of(Fraction(-1))})
    w = GaussianRational.of(Fraction(1, 2), Fraction(2))
    exact = g(w)
    approx = g(complex(w))
    assert abs(complex(exact) - approx) <= 1e-12


def test_complex_polynomial_merges_terms():
    g = ComplexPolynomial.make([(1, 0, Fraction(2)), (1, 0, Fraction(-2))])
    assert g.terms == ()


def complex_square():
    return [GaussianRational.of(Fraction(0)), GaussianRational.of(Fraction(1)),
            GaussianRational.of(Fraction(1), Fraction(1)),
            GaussianRational.of(Fraction(0), Fraction(1)),
            GaussianRational.of(Fraction(0))]


def test_morera_conjugate_measures_area():
    g = ComplexPolynomial.make({(0, 1): GaussianRational.of(Fraction(1))})
    got = morera_defect(g, complex_square())
    assert (got.re, got.im) == (Fraction(0), Fraction(2))


def test_morera_holomorphic_vanishes():
    zero = GaussianRational.of(Fraction(0))
    for g in (ComplexPolynomial.make({(2, 0): GaussianRational.of(Fraction(1))}),
              ComplexPolynomial.make({(1, 0): GaussianRational.of(Fraction(7)),
                                      (0, 0): GaussianRational.of(Fraction(1),
                                                                  Fraction(3))})):
        got = morera_defect(g, complex_square())
        assert (got.re, got.im) == (zero.re, zero.im)


def test_morera_requires_closed():
    g = ComplexPolynomial.make({(0, 1): GaussianRational.of(Fraction(1))})
    with pytest.raises(CurveError):
        morera_defect(g, complex_square()[:-1])
    with pytest.raises(CurveError):
        morera_defect(g, complex_square()[:1])


def midpoint_contour(g, vertices, steps):
    """Float midpoint rule for the same contour integral."""
    total = 0j
    for a, b in zip(vertices, vertices[1:]):
        za, zb = complex(a), complex(b)
        dz = (zb - za) / steps
        for k in range(steps):
            mid = za + (k + 0.5) * (zb - za) / steps
            total += g(mid) * dz
    return total


def test_morera_matches_quadrature():
    rng = random.Random(3)
    terms = {}
    for _ in range(4):
        terms[(rng.randint(0, 2), rng.randint(0, 2))] = GaussianRational.of(
            Fraction(rng.randint(-3, 3), rng.randint(1, 2)),
            Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
    g = ComplexPolynomial.make(terms)
    verts = complex_square()
    exact = complex(morera_defect(g, verts))
    approx = midpoint_contour(g, verts, 4000)
    assert abs(exact - approx) <= 1e-6 * (1 + abs(exact))
