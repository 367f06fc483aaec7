"""Exact linear algebra over the rationals.

Rank is computed by fraction-free (Bareiss) elimination with full pivot
choice after clearing denominators, so every intermediate value is an exact
integer minor of the input.  No floating point anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .scalars import Scalar, is_exact, ExactScalarRequired

Matrix = Sequence[Sequence[Scalar]]


def _integer_rows(mat: Matrix) -> list[list[int]]:
    rows = []
    for row in mat:
        fr = []
        for x in row:
            if not is_exact(x):
                raise ExactScalarRequired(
                    f"exact rank requires rational entries, got {type(x).__name__}")
            fr.append(Fraction(x))
        scale = 1
        for x in fr:
            scale = scale * x.denominator // gcd(scale, x.denominator)
        rows.append([int(x * scale) for x in fr])
    return rows


def exact_rank(mat: Matrix) -> int:
    """Rank of a rational matrix, exact."""
    m = _integer_rows(mat)
    if not m or not m[0]:
        return 0
    nrow, ncol = len(m), len(m[0])
    rank = 0
    prev = 1
    for k in range(min(nrow, ncol)):
        # full pivot search; smallest nonzero magnitude keeps the minors tame
        pivot = None
        for i in range(k, nrow):
            for j in range(k, ncol):
                v = m[i][j]
                if v != 0 and (pivot is None or abs(v) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            m[pi], m[k] = m[k], m[pi]
        if pj != k:
            for row in m:
                row[pj], row[k] = row[k], row[pj]
        rank += 1
        pv = m[k][k]
        for i in range(k + 1, nrow):
            for j in range(k + 1, ncol):
                # Bareiss update: result is an exact minor, division is exact
                m[i][j] = (pv * m[i][j] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pv
    return rank


def mat_vec(mat: Matrix, vec: Sequence[Scalar]) -> list:
    return [sum(row[j] * vec[j] for j in range(len(vec))) for row in mat]


def mat_mul(a: Matrix, b: Matrix) -> list[list]:
    n, k, mcols = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(mcols)]
            for i in range(n)]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
            for i in range(n)]
