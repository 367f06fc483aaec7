"""Atom semantics, inversion, matrices, and the classifier."""

import random
from fractions import Fraction

import pytest

from carnot_filiform import (ComplexConjugation, GradedAuto, GradedAutoParams,
                             LeftTranslation, MapError, Rejection, Shear,
                             algebra_by_label, apply_map, automorphism_matrix,
                             classify_graded_automorphism, compose,
                             conjugation_matrix, group_product, invert_map,
                             predicted_differential)
from carnot_filiform.piecewise import polynomial_profile, profile_from_samples


def ramp():
    return profile_from_samples([Fraction(-10), Fraction(10)],
                                [Fraction(-10), Fraction(10)])


def test_translation_is_left_product(fr3, rng):
    g = fr3.element([Fraction(1), Fraction(-2), Fraction(1, 3), Fraction(0)])
    m = LeftTranslation(g)
    for _ in range(5):
        p = fr3.element([Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                         for _ in range(fr3.dim)])
        assert apply_map(fr3, m, p).coords == \
            group_product(fr3, g, p).coords


def test_shear_component_convention(fr2):
    # h moves the abelian coordinate, its negated antiderivative the next
    # one; on a step-2 algebra the group correction is x1 h(x1) / 2
    h = ramp()
    p = fr2.element([Fraction(3), Fraction(5), Fraction(7)])
    got = apply_map(fr2, Shear(h), p)
    x1 = Fraction(3)
    hh = x1                       # ramp: h(x) = x on [-10, 10]
    big = x1 * x1 / 2             # antiderivative from zero
    want = (x1, Fraction(5) + hh, Fraction(7) - big + x1 * hh / 2)
    assert got.coords == want


def test_shear_fixed_point_at_origin(fr3):
    h = ramp()                    # h(0) = 0
    assert apply_map(fr3, Shear(h), fr3.zero()).coords == fr3.zero().coords


def test_shear_roundtrip_small(fr3, rng):
    h = ramp()
    word = Shear(h)
    back = invert_map(word)
    for _ in range(10):
        p = fr3.element([Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                         for _ in range(fr3.dim)])
        assert apply_map(fr3, back, apply_map(fr3, word, p)).coords == p.coords


def test_shear_rejected_off_real_filiform(fc3, hc1):
    with pytest.raises(MapError):
        apply_map(fc3, Shear(ramp()), fc3.zero())
    with pytest.raises(MapError):
        apply_map(hc1, Shear(ramp()), hc1.zero())


def test_shear_lipschitz_certificate():
    h = ramp()
    assert Shear(h).lipschitz == Fraction(1)
    assert Shear(h, Fraction(2)).lipschitz == Fraction(2)
    with pytest.raises(MapError):
        Shear(h, Fraction(1, 2))


def test_conjugation_atom(fc3, fr3):
    p = fc3.element([Fraction(k) for k in range(1, 9)])
    got = apply_map(fc3, ComplexConjugation(), p)
    assert got.coords == fc3.tau_coords(p.coords)
    twice = apply_map(fc3, compose(ComplexConjugation(),
                                   ComplexConjugation()), p)
    assert twice.coords == p.coords
    with pytest.raises(MapError):
        apply_map(fr3, ComplexConjugation(), fr3.zero())


def test_graded_auto_is_automorphism(fr5, rng):
    params = GradedAutoParams(Fraction(2), Fraction(-1, 3), Fraction(5, 7))
    m = GradedAuto(params)
    for _ in range(8):
        x = fr5.element([Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                         for _ in range(fr5.dim)])
        y = fr5.element([Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                         for _ in range(fr5.dim)])
        lhs = apply_map(fr5, m, group_product(fr5, x, y))
        rhs = group_product(fr5, apply_map(fr5, m, x), apply_map(fr5, m, y))
        assert lhs.coords == rhs.coords


def test_graded_auto_scales_layers(fr5):
    params = GradedAutoParams(Fraction(3), Fraction(2), Fraction(0))
    mat = automorphism_matrix(fr5, params)
    diag = [mat[i][i] for i in range(fr5.dim)]
    assert diag == [Fraction(3), Fraction(2), Fraction(6), Fraction(18),
                    Fraction(54), Fraction(162)]
    assert mat[1][0] == Fraction(0)


def test_graded_auto_b_slot(fr3):
    params = GradedAutoParams(Fraction(1), Fraction(1), Fraction(4))
    mat = automorphism_matrix(fr3, params)
    assert mat[1][0] == Fraction(4)
    p = fr3.element([Fraction(1), Fraction(0), Fraction(0), Fraction(0)])
    assert apply_map(fr3, GradedAuto(params), p).coords[1] == Fraction(4)


def test_graded_auto_inverse(fr5, rng):
    params = GradedAutoParams(Fraction(2), Fraction(-3), Fraction(1, 2))
    word = GradedAuto(params)
    back = invert_map(word)
    for _ in range(6):
        p = fr5.element([Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                         for _ in range(fr5.dim)])
        assert apply_map(fr5, back, apply_map(fr5, word, p)).coords == p.coords


def test_params_validation():
    with pytest.raises(MapError):
        GradedAutoParams(Fraction(0), Fraction(1), Fraction(0))
    with pytest.raises(MapError):
        GradedAutoParams(Fraction(1), Fraction(0), Fraction(0))


def test_compose_order(fr3):
    g = fr3.element([Fraction(1), Fraction(0), Fraction(0), Fraction(0)])
    doubler = GradedAuto(GradedAutoParams(Fraction(2), Fraction(2),
                                          Fraction(0)))
    p = fr3.zero()
    # translate then scale: the translation gets scaled
    a = apply_map(fr3, compose(LeftTranslation(g), doubler), p)
    assert a.coords[0] == Fraction(2)
    # scale then translate: it does not
    b = apply_map(fr3, compose(doubler, LeftTranslation(g)), p)
    assert b.coords[0] == Fraction(1)


def test_word_inverse_reverses(fr3, rng):
    word = compose(LeftTranslation(fr3.element([Fraction(1), Fraction(2),
                                                Fraction(0), Fraction(1)])),
                   GradedAuto(GradedAutoParams(Fraction(2), Fraction(1, 2),
                                               Fraction(-1))),
                   Shear(ramp()))
    back = invert_map(word)
    for _ in range(6):
        p = fr3.element([Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                         for _ in range(fr3.dim)])
        assert apply_map(fr3, back, apply_map(fr3, word, p)).coords == p.coords
        assert apply_map(fr3, word, apply_map(fr3, back, p)).coords == p.coords


def test_classifier_roundtrip_real(fr5):
    params = GradedAutoParams(Fraction(3, 2), Fraction(-2), Fraction(5))
    got = classify_graded_automorphism(fr5, automorphism_matrix(fr5, params))
    assert got == params


def test_classifier_roundtrip_complex(fc3):
    from carnot_filiform import GaussianRational
    params = GradedAutoParams(GaussianRational.of(Fraction(1), Fraction(2)),
                              GaussianRational.of(Fraction(0), Fraction(-1)),
                              GaussianRational.of(Fraction(3)),
                              conjugated=True)
    got = classify_graded_automorphism(fc3, automorphism_matrix(fc3, params))
    assert got == params


def test_classifier_rejects_off_family(fr5):
    params = GradedAutoParams(Fraction(2), Fraction(1), Fraction(0))
    mat = [list(row) for row in automorphism_matrix(fr5, params)]
    mat[3][2] = Fraction(1, 7)          # ties two layers together
    got = classify_graded_automorphism(fr5, mat)
    assert isinstance(got, Rejection)
    assert got.condition


def test_classifier_rejects_non_invertible(fr3):
    mat = [[Fraction(0)] * fr3.dim for _ in range(fr3.dim)]
    got = classify_graded_automorphism(fr3, mat)
    assert isinstance(got, Rejection)


def test_b_slot_perturbation_stays_in_family(fr5):
    params = GradedAutoParams(Fraction(2), Fraction(3), Fraction(0))
    mat = [list(row) for row in automorphism_matrix(fr5, params)]
    mat[1][0] = Fraction(9)
    got = classify_graded_automorphism(fr5, mat)
    assert got == GradedAutoParams(Fraction(2), Fraction(3), Fraction(9))


def test_conjugation_matrix_squares_to_identity(fc3):
    m = conjugation_matrix(fc3)
    n = fc3.dim
    sq = [[sum(m[i][k] * m[k][j] for k in range(n)) for j in range(n)]
          for i in range(n)]
    assert all(sq[i][j] == (1 if i == j else 0)
               for i in range(n) for j in range(n))


def test_predicted_differential_translation_is_identity(fr3):
    g = fr3.element([Fraction(1), Fraction(1), Fraction(1), Fraction(1)])
    p = fr3.element([Fraction(2), Fraction(0), Fraction(1), Fraction(0)])
    mat = predicted_differential(fr3, LeftTranslation(g), p)
    assert all(mat[i][j] == (1 if i == j else 0)
               for i in range(fr3.dim) for j in range(fr3.dim))


def test_predicted_differential_of_auto_is_its_matrix(fr3):
    params = GradedAutoParams(Fraction(2), Fraction(3), Fraction(-1))
    p = fr3.element([Fraction(1), Fraction(2), Fraction(0), Fraction(1)])
    assert predicted_differential(fr3, GradedAuto(params), p) == \
        automorphism_matrix(fr3, params)


def test_predicted_differential_of_shear_uses_local_slope(fr2):
    h = ramp()                          # slope 1 inside [-10, 10]
    p = fr2.element([Fraction(2), Fraction(0), Fraction(0)])
    mat = predicted_differential(fr2, Shear(h), p)
    assert mat[1][0] == Fraction(1)
    assert mat[0][0] == Fraction(1) and mat[1][1] == Fraction(1)
