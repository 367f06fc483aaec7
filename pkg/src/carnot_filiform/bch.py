"""Truncated Baker-Campbell-Hausdorff arithmetic, exact over the rationals.

Two evaluation routes on purpose:

* :func:`dynkin_product` is the ground-truth series evaluator.  It enumerates
  Dynkin block sequences (p_1,q_1),...,(p_m,q_m) with the standard
  coefficients, grouped by right-normed bracket word so the per-product cost
  is a few hundred sparse brackets instead of tens of thousands.  It is meant
  for verification and stays off hot paths.
* :func:`group_product` is the production group law: closed form for step <= 2
  and an operator form of the abelian-tail expansion for the filiform
  families, where the ideal spanned by e_2, e_3, ... is abelian and
  v * W = v + Phi_v(W) with Phi_v = id + (1/2) ad_v + sum_j c_j ad_v^j.

The tail coefficients c_j are extracted from the oracle once per step and
cached, never hard-coded; the degree-3 value is asserted to equal 1/12.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .algebra import (AlgebraError, Element, GradedAlgebra, filiform_kind,
                      horizontal_indices, in_abelian_ideal, make_filiform_real)
from .scalars import Scalar, is_exact, require_exact

DEFAULT_MAX_STEP = 8


# === Dynkin oracle ======================================================

def _block_sequences(total_max: int, nblocks: int):
    if nblocks == 0:
        yield ()
        return
    for d in range(1, total_max - nblocks + 2):
        for p in range(d + 1):
            for rest in _block_sequences(total_max - d, nblocks - 1):
                yield ((p, d - p),) + rest


@lru_cache(maxsize=None)
def _dynkin_words(step: int) -> tuple:
    """Dynkin series re-expressed over right-normed words.

    Returns ((letters, final, coeff), ...) where ``letters`` is a tuple over
    {0: ad X, 1: ad Y} applied left to right to the base letter ``final``
    (0 = X, 1 = Y).  Terms whose block sequence ends with q_m > 1, or with
    q_m = 0 and p_m > 1, vanish identically and are dropped during
    accumulation, as are words whose accumulated coefficient cancels to zero.
    """
    acc: dict = {}
    for m in range(1, step + 1):
        for seq in _block_sequences(step, m):
            pm, qm = seq[-1]
            if qm > 1 or (qm == 0 and pm > 1):
                continue
            degree = sum(p + q for p, q in seq)
            coeff = Fraction((-1) ** (m + 1), m) / degree
            for p, q in seq:
                coeff /= factorial(p) * factorial(q)
            if qm >= 1:
                blocks = seq[:-1] + ((pm, qm - 1),)
                final = 1
            else:
                blocks = seq[:-1]
                final = 0
            letters = tuple(letter for p, q in blocks
                            for letter in (0,) * p + (1,) * q)
            key = (letters, final)
            acc[key] = acc.get(key, Fraction(0)) + coeff
    return tuple((letters, final, c) for (letters, final), c in sorted(acc.items())
                 if c != 0)


def _dynkin_coords(alg: GradedAlgebra, xc, yc) -> list:
    base = {0: list(xc), 1: list(yc)}
    memo: dict = {}

    def word_value(letters: tuple, final: int) -> list:
        key = (letters, final)
        if key in memo:
            return memo[key]
        if not letters:
            val = base[final]
        else:
            inner = word_value(letters[1:], final)
            val = alg.bracket_coords(base[letters[0]], inner)
        memo[key] = val
        return val

    # the empty words carry X and Y themselves with coefficient 1, so the
    # series sum below is the whole product
    out = [0] * alg.dim
    for letters, final, coeff in _dynkin_words(alg.step):
        w = word_value(letters, final)
        for i, wi in enumerate(w):
            if wi:
                out[i] += coeff * wi
    return out


def dynkin_product(alg: GradedAlgebra, X: Element, Y: Element, *,
                   max_step: int = DEFAULT_MAX_STEP) -> Element:
    """Ground-truth BCH product via the Dynkin series, exact.

    The series truncates at the algebra's step; steps above ``max_step`` are
    refused rather than silently mis-truncated.
    """
    alg.check_same(X.algebra)
    alg.check_same(Y.algebra)
    require_exact(X.coords, "dynkin_product")
    require_exact(Y.coords, "dynkin_product")
    if alg.step > max_step:
        raise AlgebraError(
            f"oracle supports step <= {max_step}, algebra has step {alg.step}")
    return Element(alg, tuple(_dynkin_coords(alg, X.coords, Y.coords)))


def bch_coefficients(n: int) -> dict[int, Fraction]:
    """Tail coefficients c_2..c_{n-1}: X * Y = X + Y + [X,Y]/2 + sum c_j ad_X^j Y.

    Extracted from the oracle as the e_{2+j} coordinates of e_1 * e_2 on the
    real filiform algebra of step n.  Cached per n.
    """
    return dict(_bch_coefficients_cached(n))


@lru_cache(maxsize=None)
def _bch_coefficients_cached(n: int) -> tuple:
    if n < 2:
        raise AlgebraError(f"tail coefficients need step >= 2, got {n}")
    alg = make_filiform_real(n)
    prod = dynkin_product(alg, alg.e(1), alg.e(2), max_step=max(n, DEFAULT_MAX_STEP))
    coeffs = {}
    for j in range(2, n):
        coeffs[j] = Fraction(prod.coords[j + 1])
    if n >= 3 and coeffs[2] != Fraction(1, 12):
        raise AssertionError(
            f"degree-3 tail coefficient came out {coeffs[2]}, expected 1/12")
    return tuple(sorted(coeffs.items()))


# === fast group law =====================================================

@lru_cache(maxsize=None)
def _phi_series(step: int) -> tuple:
    """Coefficients of Phi = 1 + z/2 + sum c_j z^j and of 1/Phi, mod z^step.

    Phi_v is this polynomial evaluated at the nilpotent operator ad_v, so its
    inverse is simply the reciprocal power series evaluated there too.
    """
    coeffs = bch_coefficients(step) if step >= 3 else {}
    p = [Fraction(1), Fraction(1, 2)] + [coeffs[j] for j in range(2, step)]
    q = [Fraction(1)]
    for k in range(1, step):
        q.append(-sum(p[i] * q[k - i] for i in range(1, k + 1)))
    return tuple(p), tuple(q)


def _apply_ad_series(alg: GradedAlgebra, coeffs, v: list, w: list,
                     sign: int, bracket) -> list:
    """sum_j coeffs[j] sign^j ad_v^j (w); coeffs[0] is always 1."""
    out = list(w)
    term = w
    s = 1
    for j in range(1, len(coeffs)):
        term = bracket(v, term)
        if not any(term):
            break
        s *= sign
        c = coeffs[j] * s
        if c:
            out = [o + c * t for o, t in zip(out, term)]
    return out


def _tail_operator(alg: GradedAlgebra, v: list, w: list, signs: int) -> list:
    """Phi_v(W) when signs=+1, Phi_{-v}(W) when signs=-1."""
    phi, _ = _phi_series(alg.step)
    return _apply_ad_series(alg, phi, v, w, signs, alg.bracket_coords)


def _tail_operator_inverse(alg: GradedAlgebra, v: list, u: list) -> list:
    """Phi_v^{-1}(U) via the reciprocal series of Phi."""
    _, inv = _phi_series(alg.step)
    return _apply_ad_series(alg, inv, v, u, +1, alg.bracket_coords)


def _filiform_product(alg: GradedAlgebra, x, y, phi, inv, bracket) -> tuple:
    gen = horizontal_indices(alg)
    dim = alg.dim

    def split(c):
        v = [c[i] if i in gen else 0 for i in range(dim)]
        w = [0 if i in gen else c[i] for i in range(dim)]
        return v, w

    def series(coeffs, v, w, sign):
        return _apply_ad_series(alg, coeffs, v, w, sign, bracket)

    vx, ux = split(x)
    vy, uy = split(y)
    wx = series(inv, vx, ux, +1)
    wy = series(inv, vy, uy, +1)
    a = series(inv, vy, series(phi, vy, wx, -1), +1)
    mid = [p + q for p, q in zip(a, wy)]
    vsum = [p + q for p, q in zip(vx, vy)]
    out = series(phi, vsum, mid, +1)
    return tuple(o + v for o, v in zip(out, vsum))


@lru_cache(maxsize=None)
def _float_bracket(alg: GradedAlgebra):
    """Closure computing the bracket in pure float arithmetic."""
    flat = tuple((i, j, k, float(c)) for i, j, k, c in alg._flat)
    dim = alg.dim

    def bracket(x, y):
        out = [0.0] * dim
        for i, j, k, c in flat:
            v = x[i] * y[j] - x[j] * y[i]
            if v:
                out[k] += c * v
        return out

    return bracket


@lru_cache(maxsize=None)
def _phi_series_float(step: int) -> tuple:
    p, q = _phi_series(step)
    return tuple(float(c) for c in p), tuple(float(c) for c in q)


def offset_by_ideal(alg: GradedAlgebra, p, w) -> tuple:
    """Coordinates of p * W when W lies in the abelian ideal.

    One series pass instead of the four the general product needs:
    writing p = v * m with v horizontal, both m and W sit in the abelian
    ideal, so p * W = v * (m + W) = p + Phi_v(W).  Falls back to the full
    product when the algebra offers no such split.
    """
    if alg.step <= 2 or filiform_kind(alg) is None:
        return product_coords(alg, p, w)
    gen = horizontal_indices(alg)
    if all(is_exact(c) for c in p) and all(is_exact(c) for c in w):
        phi, _ = _phi_series(alg.step)
        v = [p[i] if i in gen else 0 for i in range(alg.dim)]
        shifted = _apply_ad_series(alg, phi, v, list(w), +1, alg.bracket_coords)
    else:
        phi, _ = _phi_series_float(alg.step)
        p = [float(c) for c in p]
        w = [float(c) for c in w]
        v = [p[i] if i in gen else 0.0 for i in range(alg.dim)]
        shifted = _apply_ad_series(alg, phi, v, w, +1, _float_bracket(alg))
    return tuple(a + b for a, b in zip(p, shifted))


def product_coords(alg: GradedAlgebra, x, y) -> tuple:
    """Group-law coordinates without the exactness gate.

    Exact inputs give exact outputs; float inputs take a float fast path
    (used by the optimizer and the distortion sampler).
    """
    exact = all(is_exact(c) for c in x) and all(is_exact(c) for c in y)
    if alg.step == 1:
        return tuple(a + b for a, b in zip(x, y))
    if alg.step == 2:
        if exact:
            br = alg.bracket_coords(x, y)
            half = Fraction(1, 2)
            return tuple(a + b + half * c for a, b, c in zip(x, y, br))
        xf, yf = [float(c) for c in x], [float(c) for c in y]
        br = _float_bracket(alg)(xf, yf)
        return tuple(a + b + 0.5 * c for a, b, c in zip(xf, yf, br))
    if filiform_kind(alg) is not None:
        if exact:
            phi, inv = _phi_series(alg.step)
            return _filiform_product(alg, x, y, phi, inv, alg.bracket_coords)
        phi, inv = _phi_series_float(alg.step)
        return _filiform_product(alg, [float(c) for c in x],
                                 [float(c) for c in y], phi, inv,
                                 _float_bracket(alg))
    return tuple(_dynkin_coords(alg, x, y))


def group_product(alg: GradedAlgebra, X: Element, Y: Element) -> Element:
    """Production group law in exponential coordinates, exact.

    Step 1 and 2 use closed forms, the filiform families use the abelian-tail
    operator form, anything else falls back to the Dynkin evaluator.  Always
    agrees with :func:`dynkin_product`; the unit and acceptance suites check
    that equality on random inputs.
    """
    alg.check_same(X.algebra)
    alg.check_same(Y.algebra)
    require_exact(X.coords, "group_product")
    require_exact(Y.coords, "group_product")
    return Element(alg, product_coords(alg, X.coords, Y.coords))


def group_inverse(X: Element) -> Element:
    """Group inverse; negation in exponential coordinates."""
    return -X


def conjugate(alg: GradedAlgebra, g: Element, X: Element) -> Element:
    """g^{-1} * X * g."""
    return group_product(alg, group_product(alg, -g, X), g)


# === abelian-tail products ==============================================

def abelian_tail_product(alg: GradedAlgebra, X: Element, Y: Element, *,
                         reverse: bool = False) -> Element:
    """Closed-form product X * Y for Y in the abelian ideal of a filiform algebra.

    X * Y = X + Y + [X,Y]/2 + sum_{j=2}^{n-1} c_j (ad X)^j Y.  With
    ``reverse`` the result is Y * X, which flips the sign of the degree-2 term
    and weights the tail by (-1)^j.
    """
    if filiform_kind(alg) is None:
        raise AlgebraError(f"abelian tail product needs a filiform algebra, not {alg.label}")
    alg.check_same(X.algebra)
    alg.check_same(Y.algebra)
    require_exact(X.coords, "abelian_tail_product")
    require_exact(Y.coords, "abelian_tail_product")
    if not in_abelian_ideal(alg, Y):
        raise AlgebraError("second factor must lie in the abelian ideal "
                           "(zero generator-line coordinates)")
    n = alg.step
    coeffs = bch_coefficients(n) if n >= 3 else {}
    sign = -1 if reverse else 1
    out = [a + b for a, b in zip(X.coords, Y.coords)]
    term = alg.bracket_coords(X.coords, Y.coords)
    out = [o + Fraction(sign, 2) * t for o, t in zip(out, term)]
    for j in range(2, n):
        term = alg.bracket_coords(X.coords, term)
        c = coeffs[j] * (sign ** j)
        if c:
            out = [o + c * t for o, t in zip(out, term)]
    return Element(alg, tuple(out))


def conjugate_by_horizontal(alg: GradedAlgebra, t: Scalar, Y: Element) -> Element:
    """(-t e_1) * Y * (t e_1) for Y in the abelian ideal of a filiform algebra.

    The ideal is ad(e_1)-invariant, so the result stays in it and the e_2
    coordinate never moves; coordinate j picks up -t x_{j-1} plus terms
    divisible by t^2.
    """
    if filiform_kind(alg) is None:
        raise AlgebraError(f"horizontal conjugation needs a filiform algebra, not {alg.label}")
    alg.check_same(Y.algebra)
    require_exact(Y.coords, "conjugate_by_horizontal")
    require_exact([t], "conjugate_by_horizontal")
    if not in_abelian_ideal(alg, Y):
        raise AlgebraError("conjugation target has a nonzero e_1-component")
    te1 = alg.basis(0).scale(Fraction(t))
    return group_product(alg, group_product(alg, -te1, Y), te1)
