"""Exact rank against hand-built matrices and a float-free guarantee."""

import random
from fractions import Fraction

import pytest

from carnot_filiform.linalg import exact_rank, identity, mat_mul, mat_vec
from carnot_filiform.scalars import ExactScalarRequired


def test_rank_of_identity():
    assert exact_rank(identity(5)) == 5


def test_rank_of_zero_and_empty():
    assert exact_rank([[Fraction(0)] * 3 for _ in range(3)]) == 0
    assert exact_rank([]) == 0
    assert exact_rank([[]]) == 0


def test_rank_of_outer_product():
    # u v^T always has rank one
    u = [Fraction(1, 3), Fraction(-2), Fraction(5, 7)]
    v = [Fraction(4), Fraction(1, 9), Fraction(0), Fraction(-3)]
    m = [[a * b for b in v] for a in u]
    assert exact_rank(m) == 1


def test_rank_detects_near_singular_exactly():
    # determinant is 2*eps: invisible to floats, exact here
    eps = Fraction(1, 10**40)
    m = [[Fraction(1), Fraction(2)],
         [Fraction(1) + eps, Fraction(2)]]
    assert exact_rank(m) == 2
    m2 = [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(6)]]
    assert exact_rank(m2) == 1


def test_rank_random_products(rng=random.Random(11)):
    # A (n x r) B (r x n) has rank at most r, equal to r generically
    for _ in range(10):
        n, r = 5, rng.randint(1, 4)
        a = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3))
              for _ in range(r)] for _ in range(n)]
        b = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3))
              for _ in range(n)] for _ in range(r)]
        assert exact_rank(mat_mul(a, b)) <= r


def test_rank_rejects_floats():
    with pytest.raises(ExactScalarRequired):
        exact_rank([[0.5, 1.0], [1.0, 2.0]])


def test_mat_vec():
    m = [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(3)]]
    assert mat_vec(m, [Fraction(1), Fraction(1, 2)]) == \
        [Fraction(2), Fraction(3, 2)]


def test_mat_mul_associates():
    a = [[Fraction(1), Fraction(2)], [Fraction(3), Fraction(4)]]
    b = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
    c = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(2)]]
    assert mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c))
