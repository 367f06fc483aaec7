"""Polynomial and profile behavior; antiderivative against sympy."""

import math
import random
from fractions import Fraction

import pytest
import sympy

from carnot_filiform.piecewise import (PiecewiseError, PiecewisePolynomial,
                                       Polynomial, polynomial_profile,
                                       profile_from_pieces,
                                       profile_from_samples)


def test_polynomial_evaluation_and_trim():
    p = Polynomial.make([1, 2, 0, 3, 0])
    assert p.coeffs == (Fraction(1), Fraction(2), Fraction(0), Fraction(3))
    assert p.degree == 3
    assert p(Fraction(2)) == 1 + 4 + 24
    assert p(0.5) == 1.0 + 1.0 + 3 * 0.125


def test_polynomial_ring_ops():
    p = Polynomial.make([1, 1])
    q = Polynomial.make([0, 0, 2])
    assert (p + q).coeffs == (Fraction(1), Fraction(1), Fraction(2))
    assert (p * p).coeffs == (Fraction(1), Fraction(2), Fraction(1))
    assert (-p).coeffs == (Fraction(-1), Fraction(-1))


def test_derivative_antiderivative_inverse():
    rng = random.Random(5)
    for _ in range(10):
        p = Polynomial.make([Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                             for _ in range(rng.randint(1, 6))])
        assert p.antiderivative().derivative().coeffs == p.coeffs


def test_compose_affine():
    p = Polynomial.make([0, 0, 1])            # x^2
    q = p.compose_affine(Fraction(1), Fraction(2))
    for x in (Fraction(0), Fraction(3), Fraction(-1, 2)):
        assert q(x) == (1 + 2 * x) ** 2


def test_bound_on_contains_range():
    rng = random.Random(6)
    for _ in range(10):
        p = Polynomial.make([Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                             for _ in range(rng.randint(1, 5))])
        lo, hi = Fraction(-2), Fraction(3)
        bound = p.bound_on(lo, hi)
        for k in range(21):
            x = lo + (hi - lo) * Fraction(k, 20)
            assert abs(p(x)) <= bound


def test_profile_needs_one_more_piece():
    with pytest.raises(PiecewiseError):
        PiecewisePolynomial.make([0], [[1]])
    with pytest.raises(PiecewiseError):
        PiecewisePolynomial.make([0, 0], [[1], [1], [1]])


def test_profile_continuity_enforced():
    with pytest.raises(PiecewiseError):
        PiecewisePolynomial.make([Fraction(1)], [[0], [5]])
    # matching values at the seam are fine
    PiecewisePolynomial.make([Fraction(1)], [[0, 1], [1]])


def test_piece_lookup_at_breakpoints():
    h = PiecewisePolynomial.make([Fraction(0), Fraction(1)],
                                 [[0], [0, 1], [1]])
    assert h(Fraction(-5)) == 0
    assert h(Fraction(0)) == 0
    assert h(Fraction(1, 2)) == Fraction(1, 2)
    assert h(Fraction(1)) == 1
    assert h(Fraction(7)) == 1
    # float lookups agree with the exact ones, including on breakpoints
    for x in (-5.0, 0.0, 0.5, 1.0, 7.0):
        assert h(x) == float(h(Fraction(x)))


def test_one_sided_slopes_and_smoothness():
    h = PiecewisePolynomial.make([Fraction(0)], [[0], [0, 1]])
    assert h.one_sided_slopes(Fraction(0)) == (Fraction(0), Fraction(1))
    assert not h.is_smooth_at(Fraction(0))
    assert h.slope_at(Fraction(5)) == Fraction(1)
    with pytest.raises(PiecewiseError):
        h.slope_at(Fraction(0))


def test_slope_bound_cases():
    ramp = profile_from_samples([Fraction(0), Fraction(1)],
                                [Fraction(0), Fraction(3)])
    assert ramp.slope_bound() == Fraction(3)
    quad = polynomial_profile([0, 0, 1])
    assert quad.slope_bound() == math.inf
    flat = polynomial_profile([7])
    assert flat.slope_bound() == Fraction(0)


def test_antiderivative_characterization():
    h = profile_from_pieces([(Fraction(-1), Fraction(0), (0, -1)),
                             (Fraction(0), Fraction(2), (0, 0, 1))])
    big = h.antiderivative_from_zero()
    assert big(Fraction(0)) == 0
    assert big.breakpoints == h.breakpoints
    for raw, integrated in zip(h.pieces, big.pieces):
        assert integrated.derivative().coeffs == raw.coeffs


def test_antiderivative_against_sympy():
    h = profile_from_pieces([(Fraction(-2), Fraction(0), (1, 1)),
                             (Fraction(0), Fraction(1), (1, 0, -2)),
                             (Fraction(1), Fraction(3), (-3, 2))])
    big = h.antiderivative_from_zero()
    x = sympy.Symbol("x")
    precise = sympy.Piecewise(
        (sympy.Rational(-1), x < -2),
        (1 + x, x < 0),
        (1 - 2 * x ** 2, x < 1),
        (-3 + 2 * x, x < 3),
        (sympy.Rational(3), True))
    rng = random.Random(7)
    for _ in range(12):
        pt = Fraction(rng.randint(-40, 40), 10)
        want = sympy.integrate(precise, (x, 0, sympy.Rational(pt)))
        assert sympy.Rational(big(pt)) == want


def test_profile_from_pieces_validation():
    with pytest.raises(PiecewiseError):
        profile_from_pieces([])
    with pytest.raises(PiecewiseError):                       # gap in spans
        profile_from_pieces([(Fraction(0), Fraction(1), (0, 1)),
                             (Fraction(2), Fraction(3), (1,))])
    with pytest.raises(PiecewiseError):                       # value jump
        profile_from_pieces([(Fraction(0), Fraction(1), (0, 1)),
                             (Fraction(1), Fraction(2), (5,))])


def test_profile_from_pieces_clamps_tails():
    h = profile_from_pieces([(Fraction(0), Fraction(1), (0, 2))])
    assert h(Fraction(-100)) == 0
    assert h(Fraction(100)) == 2
    assert h(Fraction(1, 2)) == 1


def test_profile_from_samples_interpolates():
    xs = [Fraction(0), Fraction(1), Fraction(3)]
    ys = [Fraction(0), Fraction(2), Fraction(-2)]
    h = profile_from_samples(xs, ys)
    for xq, yq in zip(xs, ys):
        assert h(xq) == yq
    assert h(Fraction(1, 2)) == 1
    assert h(Fraction(2)) == 0
    assert h(Fraction(-9)) == 0                    # clamped
    assert h(Fraction(9)) == -2


def test_hash_consistency():
    a = PiecewisePolynomial.make([Fraction(0)], [[0], [0, 1]])
    b = PiecewisePolynomial.make([Fraction(0)], [[0], [0, 1]])
    assert a == b
    assert hash(a) == hash(b)
    assert hash(a) == hash(a)
    p, q = Polynomial.make([1, 2]), Polynomial.make([1, 2])
    assert p == q and hash(p) == hash(q)
