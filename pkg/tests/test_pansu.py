"""Scaled difference quotients and the extrapolated differential."""

from fractions import Fraction

import pytest

from carnot_filiform import (AlgebraError, GradedAuto, GradedAutoParams,
                             LeftTranslation, Rejection, Shear,
                             algebra_by_label, automorphism_matrix, compose,
                             pansu_differential_estimate,
                             predicted_differential)
from carnot_filiform.pansu import dilation_quotient
from carnot_filiform.piecewise import profile_from_pieces, profile_from_samples


def ramp():
    return profile_from_samples([Fraction(-100), Fraction(100)],
                                [Fraction(-100), Fraction(100)])


def test_translation_quotient_is_exact_identity(fr3):
    g = fr3.element([Fraction(1), Fraction(-1), Fraction(2), Fraction(0)])
    m = LeftTranslation(g)
    p = fr3.element([Fraction(1, 3), Fraction(2), Fraction(0), Fraction(1)])
    v = fr3.e(2)
    # left translations commute with the quotient construction exactly,
    # at every scale, so no extrapolation error at all
    for t in (Fraction(1), Fraction(1, 7)):
        q = dilation_quotient(fr3, m, p, v, t)
        assert q.coords == v.coords


def test_translation_differential_is_identity(fr3):
    g = fr3.element([Fraction(2), Fraction(1), Fraction(0), Fraction(-1)])
    est = pansu_differential_estimate(fr3, LeftTranslation(g),
                                      fr3.element([Fraction(1), Fraction(0),
                                                   Fraction(0), Fraction(0)]))
    assert est.flags == ()
    for i in range(fr3.dim):
        for j in range(fr3.dim):
            assert est.matrix[i][j] == (1 if i == j else 0)
    assert all(r == 0.0 for row in est.residuals for r in row)


def test_auto_differential_is_its_matrix(fr3):
    params = GradedAutoParams(Fraction(2), Fraction(1, 2), Fraction(-3))
    est = pansu_differential_estimate(fr3, GradedAuto(params), fr3.zero())
    assert est.matrix == automorphism_matrix(fr3, params)
    assert est.classification == params


def test_shear_ramp_at_origin(fr3):
    est = pansu_differential_estimate(fr3, Shear(ramp()), fr3.zero())
    want = automorphism_matrix(
        fr3, GradedAutoParams(Fraction(1), Fraction(1), Fraction(1)))
    err = max(abs(float(est.matrix[i][j]) - float(want[i][j]))
              for i in range(fr3.dim) for j in range(fr3.dim))
    assert err <= 1e-4
    assert est.classification == GradedAutoParams(Fraction(1), Fraction(1),
                                                  Fraction(1))


def test_chain_rule_against_prediction(fr3):
    word = compose(
        LeftTranslation(fr3.element([Fraction(1), Fraction(0), Fraction(1, 2),
                                     Fraction(0)])),
        GradedAuto(GradedAutoParams(Fraction(2), Fraction(1, 2),
                                    Fraction(-1))),
        Shear(ramp()))
    p = fr3.element([Fraction(1, 3), Fraction(1), Fraction(-2), Fraction(1, 5)])
    est = pansu_differential_estimate(fr3, word, p)
    want = predicted_differential(fr3, word, p)
    err = max(abs(float(est.matrix[i][j]) - float(want[i][j]))
              for i in range(fr3.dim) for j in range(fr3.dim))
    assert err <= 1e-4


def test_residuals_shrink_for_smooth_shear(fr3):
    est = pansu_differential_estimate(fr3, Shear(ramp()), fr3.zero())
    for row in est.residuals:
        for a, b in zip(row, row[1:]):
            assert b <= a + 1e-12


def test_profile_corner_raises_flag(fr2):
    # base point sits exactly on the breakpoint, where the slope jumps
    corner = profile_from_pieces([(Fraction(0), Fraction(1), (0, 1))])
    p = fr2.element([Fraction(0), Fraction(0), Fraction(0)])
    est = pansu_differential_estimate(fr2, Shear(corner), p)
    assert any("slope-jump" in f for f in est.flags)
    assert est.matrix is None
    assert est.limits is None


def test_scale_validation(fr3):
    m = LeftTranslation(fr3.zero())
    p = fr3.zero()
    with pytest.raises(AlgebraError):
        pansu_differential_estimate(fr3, m, p, scales=[Fraction(1, 10)])
    with pytest.raises(AlgebraError):
        pansu_differential_estimate(fr3, m, p,
                                    scales=[Fraction(1, 10), Fraction(1, 10)])
    with pytest.raises(AlgebraError):
        pansu_differential_estimate(fr3, m, p,
                                    scales=[Fraction(1, 10), Fraction(-1)])


def test_single_direction_skips_matrix(fr3):
    est = pansu_differential_estimate(fr3, LeftTranslation(fr3.zero()),
                                      fr3.zero(), directions=[fr3.e(1)])
    assert est.matrix is None
    assert est.classification is None
    assert len(est.limits) == 1
    assert est.limits[0].coords == fr3.e(1).coords


def test_offgrid_scales_still_converge(fr3):
    est = pansu_differential_estimate(
        fr3, Shear(ramp()), fr3.zero(),
        scales=[Fraction(1, 3), Fraction(1, 9), Fraction(1, 27)])
    assert est.classification == GradedAutoParams(Fraction(1), Fraction(1),
                                                  Fraction(1))
