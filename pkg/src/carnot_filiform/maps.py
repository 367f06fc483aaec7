"""Quasiconformal map families on the model groups.

Atoms: left translations, graded automorphisms (optionally pre-composed with
complex conjugation on the realified complex algebras), shear maps driven by a
piecewise-polynomial profile, and complex conjugation itself.  A map is a
finite word of atoms applied left to right.  With rational inputs every
application is exact, which is what turns round-trip and classification
statements into crisp equality tests.

The shear map with profile h sends a point with first coordinate x_1 to the
same point right-multiplied by the ideal vector sum_j h_j(x_1) e_j, where
h_2 = h and each later component is the negated running antiderivative of the
previous one.  That right factor only depends on x_1, so inversion is just the
sign flip of the profile.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

from .algebra import (AlgebraError, Element, GradedAlgebra, filiform_kind,
                      filiform_n)
from .bch import group_inverse, offset_by_ideal, product_coords
from .linalg import identity, mat_mul, mat_vec
from .piecewise import PiecewiseError, PiecewisePolynomial
from .scalars import GaussianRational, is_exact, require_exact

__all__ = [
    "MapError",
    "GradedAutoParams",
    "LeftTranslation",
    "GradedAuto",
    "Shear",
    "ComplexConjugation",
    "MapExpr",
    "Rejection",
    "as_map",
    "compose",
    "apply_map",
    "invert_map",
    "automorphism_matrix",
    "conjugation_matrix",
    "classify_graded_automorphism",
    "predicted_differential",
    "shear_components",
]


class MapError(ValueError):
    pass


AutoScalar = Union[int, Fraction, GaussianRational]


def _as_param(x, where: str) -> AutoScalar:
    if isinstance(x, GaussianRational):
        return Fraction(x.re) if x.is_real() else x
    if is_exact(x):
        return Fraction(x)
    raise MapError(f"{where}: exact parameter required, got {type(x).__name__}")


@dataclass(frozen=True)
class GradedAutoParams:
    """Parameters of a graded automorphism of a filiform algebra.

    The induced map is e_1 -> a1 e_1 + b e_2, e_2 -> a2 e_2 and
    e_j -> a1^(j-2) a2 e_j above; on the complex algebras the scalars may be
    Gaussian rationals and ``conjugated`` marks that coordinatewise complex
    conjugation is applied first.
    """

    a1: AutoScalar
    a2: AutoScalar
    b: AutoScalar
    conjugated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a1", _as_param(self.a1, "a1"))
        object.__setattr__(self, "a2", _as_param(self.a2, "a2"))
        object.__setattr__(self, "b", _as_param(self.b, "b"))
        if self.a1 == 0 or self.a2 == 0:
            raise MapError("a1 and a2 must be nonzero")

    @property
    def is_complex(self) -> bool:
        return (self.conjugated
                or isinstance(self.a1, GaussianRational)
                or isinstance(self.a2, GaussianRational)
                or isinstance(self.b, GaussianRational))

    def inverse(self) -> "GradedAutoParams":
        def inv(x):
            return x.inverse() if isinstance(x, GaussianRational) else 1 / Fraction(x)

        a1, a2 = inv(self.a1), inv(self.a2)
        b = -_mul(_mul(self.b, a1), a2)
        if self.conjugated:
            a1, a2, b = _conj(a1), _conj(a2), _conj(b)
        return GradedAutoParams(a1, a2, b, self.conjugated)


def _mul(x: AutoScalar, y: AutoScalar) -> AutoScalar:
    if isinstance(x, GaussianRational) or isinstance(y, GaussianRational):
        gx = x if isinstance(x, GaussianRational) else GaussianRational.of(x)
        gy = y if isinstance(y, GaussianRational) else GaussianRational.of(y)
        return gx * gy
    return Fraction(x) * Fraction(y)


def _conj(x: AutoScalar) -> AutoScalar:
    return x.conjugate() if isinstance(x, GaussianRational) else x


# === atoms and words ====================================================

@dataclass(frozen=True)
class LeftTranslation:
    g: Element


@dataclass(frozen=True)
class GradedAuto:
    params: GradedAutoParams


@dataclass(frozen=True)
class Shear:
    """Shear atom; ``lipschitz`` is the certified profile slope bound."""

    profile: PiecewisePolynomial
    lipschitz: Optional[Fraction] = None

    def __post_init__(self):
        bound = self.profile.slope_bound()
        if self.lipschitz is None:
            object.__setattr__(self, "lipschitz", bound)
        elif not bound <= self.lipschitz:
            raise MapError(
                f"claimed Lipschitz bound {self.lipschitz} not certified: "
                f"profile slopes only bounded by {bound}")


@dataclass(frozen=True)
class ComplexConjugation:
    pass


MapAtom = Union[LeftTranslation, GradedAuto, Shear, ComplexConjugation]


@dataclass(frozen=True)
class MapExpr:
    """Composition word; atoms[0] is applied first."""

    atoms: Tuple[MapAtom, ...]


def as_map(m) -> MapExpr:
    if isinstance(m, MapExpr):
        return m
    if isinstance(m, (LeftTranslation, GradedAuto, Shear, ComplexConjugation)):
        return MapExpr((m,))
    raise MapError(f"not a map: {m!r}")


def compose(first, *rest) -> MapExpr:
    """Word that applies ``first``, then each later argument in order."""
    atoms = as_map(first).atoms
    for m in rest:
        atoms = atoms + as_map(m).atoms
    return MapExpr(atoms)


# === application ========================================================

@lru_cache(maxsize=None)
def shear_components(profile: PiecewisePolynomial, count: int) -> tuple:
    """(h_2, ..., h_{count+1}): profile followed by negated antiderivatives."""
    comps = [profile]
    for _ in range(count - 1):
        comps.append(-comps[-1].antiderivative_from_zero())
    return tuple(comps)


def _require_complex(alg: GradedAlgebra, what: str) -> None:
    if alg.complex_pairs is None:
        raise MapError(f"{what} applied on a real algebra ({alg.label})")


def _apply_atom(alg: GradedAlgebra, atom: MapAtom, p: Element) -> Element:
    if isinstance(atom, LeftTranslation):
        alg.check_same(atom.g.algebra)
        return Element(alg, tuple(product_coords(alg, atom.g.coords, p.coords)))
    if isinstance(atom, GradedAuto):
        m = automorphism_matrix(alg, atom.params)
        return Element(alg, tuple(mat_vec(m, p.coords)))
    if isinstance(atom, ComplexConjugation):
        _require_complex(alg, "complex conjugation")
        return Element(alg, alg.tau_coords(p.coords))
    if isinstance(atom, Shear):
        if filiform_kind(alg) != "real":
            raise MapError(f"shear maps are defined on the real filiform groups, "
                           f"not on {alg.label}")
        comps = shear_components(atom.profile, alg.dim - 1)
        x1 = p.coords[0]
        shift = [x1 * 0] * alg.dim            # zero of the right scalar type
        for slot, h in enumerate(comps, start=1):
            shift[slot] = h(x1)
        # the shift never touches e_1, so the one-pass ideal product applies
        return Element(alg, offset_by_ideal(alg, p.coords, shift))
    raise MapError(f"unknown atom {atom!r}")


def apply_map(alg: GradedAlgebra, m, p: Element) -> Element:
    """Evaluate the composition word at p; exact for rational inputs."""
    alg.check_same(p.algebra)
    out = p
    for atom in as_map(m).atoms:
        out = _apply_atom(alg, atom, out)
    return out


def invert_map(m) -> MapExpr:
    """Word-by-word inverse: reversed order, each atom inverted."""
    out = []
    for atom in reversed(as_map(m).atoms):
        if isinstance(atom, LeftTranslation):
            out.append(LeftTranslation(group_inverse(atom.g)))
        elif isinstance(atom, GradedAuto):
            out.append(GradedAuto(atom.params.inverse()))
        elif isinstance(atom, Shear):
            out.append(Shear(-atom.profile, atom.lipschitz))
        elif isinstance(atom, ComplexConjugation):
            out.append(atom)
        else:
            raise MapError(f"unknown atom {atom!r}")
    return MapExpr(tuple(out))


# === matrices ===========================================================

def conjugation_matrix(alg: GradedAlgebra) -> tuple:
    _require_complex(alg, "complex conjugation")
    m = [[Fraction(0)] * alg.dim for _ in range(alg.dim)]
    for re_i, im_i in alg.complex_pairs:
        m[re_i][re_i] = Fraction(1)
        m[im_i][im_i] = Fraction(-1)
    return tuple(tuple(row) for row in m)


def _block_scalars(params: GradedAutoParams, n: int) -> list:
    """Per complex (or real) coordinate: the scalar multiplying e_{k+1}."""
    a1, a2 = params.a1, params.a2
    out = [a1, a2]
    power = a2
    for _ in range(n - 1):
        power = _mul(power, a1)
        out.append(power)
    return out


@lru_cache(maxsize=None)
def automorphism_matrix(alg: GradedAlgebra, params: GradedAutoParams) -> tuple:
    """Exact matrix of the graded automorphism in basis coordinates."""
    kind = filiform_kind(alg)
    if kind is None:
        raise AlgebraError(f"graded-automorphism parameters apply to filiform "
                           f"algebras, not {alg.label}")
    n = filiform_n(alg)
    if kind == "real":
        if params.is_complex:
            raise MapError(f"complex parameters on the real algebra {alg.label}")
        scalars = _block_scalars(params, n)
        m = [[Fraction(0)] * alg.dim for _ in range(alg.dim)]
        for k, s in enumerate(scalars):
            m[k][k] = Fraction(s)
        m[1][0] = Fraction(params.b)
        return tuple(tuple(row) for row in m)

    gr = GaussianRational.of
    scalars = [s if isinstance(s, GaussianRational) else gr(s)
               for s in _block_scalars(params, n)]
    b = params.b if isinstance(params.b, GaussianRational) else gr(params.b)
    m = [[Fraction(0)] * alg.dim for _ in range(alg.dim)]

    def put(row_pair: int, col_pair: int, g: GaussianRational):
        r, c = 2 * row_pair, 2 * col_pair
        m[r][c] = Fraction(g.re)
        m[r][c + 1] = Fraction(-g.im)
        m[r + 1][c] = Fraction(g.im)
        m[r + 1][c + 1] = Fraction(g.re)

    for k, s in enumerate(scalars):
        put(k, k, s)
    put(1, 0, b)
    mat = tuple(tuple(row) for row in m)
    if params.conjugated:
        mat = mat_mul(mat, conjugation_matrix(alg))
        mat = tuple(tuple(row) for row in mat)
    return mat


# === classification =====================================================

@dataclass(frozen=True)
class Rejection:
    """First violated condition when a matrix is not in the graded family."""

    condition: str
    detail: str


def _complex_structure_matrix(alg: GradedAlgebra) -> tuple:
    m = [[Fraction(0)] * alg.dim for _ in range(alg.dim)]
    for re_i, im_i in alg.complex_pairs:
        m[im_i][re_i] = Fraction(1)
        m[re_i][im_i] = Fraction(-1)
    return tuple(tuple(row) for row in m)


def classify_graded_automorphism(alg: GradedAlgebra, matrix: Sequence[Sequence]
                                 ) -> Union[GradedAutoParams, Rejection]:
    """Decide membership in the parametric graded-automorphism family.

    Checks run in a fixed order so the returned Rejection names the first
    violated condition: layer preservation, invariance of the second generator
    line, bracket preservation on all basis pairs, then (complex case) the
    linear / anti-linear dichotomy and parameter extraction.
    """
    kind = filiform_kind(alg)
    if kind is None or filiform_n(alg) < 3:
        raise AlgebraError("classification targets filiform algebras with at "
                           "least three layers")
    dim = alg.dim
    rows = [tuple(row) for row in matrix]
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise MapError(f"expected a {dim}x{dim} matrix")
    for r in rows:
        require_exact(r, "classification")
    m = tuple(tuple(Fraction(c) for c in r) for r in rows)

    for j in range(dim):
        for i in range(dim):
            if m[i][j] != 0 and alg.layer_of(i) != alg.layer_of(j):
                return Rejection(
                    "layer",
                    f"image of e_{j + 1} has a layer-{alg.layer_of(i)} "
                    f"component, outside layer {alg.layer_of(j)}")

    line_cols = (1,) if kind == "real" else (2, 3)
    line_rows = (0,) if kind == "real" else (0, 1)
    for j in line_cols:
        for i in line_rows:
            if m[i][j] != 0:
                return Rejection(
                    "second-generator-line",
                    "image of the second generator leaves its scalar line")

    for i in range(dim):
        for j in range(i + 1, dim):
            struct = [Fraction(0)] * dim
            for k, c in alg.table.get((i, j), {}).items():
                struct[k] = c
            lhs = mat_vec(m, struct)
            cols_i = [m[r][i] for r in range(dim)]
            cols_j = [m[r][j] for r in range(dim)]
            rhs = alg.bracket_coords(cols_i, cols_j)
            if list(lhs) != list(rhs):
                return Rejection("bracket",
                                 f"bracket of basis pair (e_{i + 1}, e_{j + 1}) "
                                 f"is not preserved")

    conjugated = False
    work = m
    if kind == "complex":
        jmat = _complex_structure_matrix(alg)
        mj = mat_mul(m, jmat)
        jm = mat_mul(jmat, m)
        if all(mj[r][c] == jm[r][c] for r in range(dim) for c in range(dim)):
            conjugated = False
        elif all(mj[r][c] == -jm[r][c] for r in range(dim) for c in range(dim)):
            conjugated = True
            work = tuple(tuple(r) for r in mat_mul(m, conjugation_matrix(alg)))
        else:
            return Rejection("complex-linearity",
                             "matrix is neither complex linear nor anti-linear")

    if kind == "real":
        a1, a2, b = work[0][0], work[1][1], work[1][0]
    else:
        def block(rp, cp):
            return GaussianRational.of(work[2 * rp][2 * cp],
                                       work[2 * rp + 1][2 * cp])

        a1, a2, b = block(0, 0), block(1, 1), block(1, 0)
    if a1 == 0 or a2 == 0 or (isinstance(a1, GaussianRational) and a1.is_zero()) \
            or (isinstance(a2, GaussianRational) and a2.is_zero()):
        return Rejection("singular", "a1 and a2 must be nonzero")

    params = GradedAutoParams(a1, a2, b, conjugated)
    expected = automorphism_matrix(alg, params)
    if any(expected[r][c] != m[r][c] for r in range(dim) for c in range(dim)):
        return Rejection("parametric-form",
                         "matrix passes the structural checks but is not of "
                         "the parametric form")
    return params


# === tangent maps =======================================================

def predicted_differential(alg: GradedAlgebra, m, p: Element) -> tuple:
    """Matrix of the tangent map at p predicted by the chain rule.

    Translations contribute the identity, graded atoms their own matrix, and
    a shear the unipotent automorphism with b equal to the profile slope at
    the current first coordinate.  Raises MapError at a slope jump.
    """
    alg.check_same(p.algebra)
    require_exact(p.coords, "predicted differential base point")
    mat = identity(alg.dim)
    mat = tuple(tuple(Fraction(c) for c in row) for row in mat)
    q = p
    for atom in as_map(m).atoms:
        if isinstance(atom, LeftTranslation):
            step = None
        elif isinstance(atom, GradedAuto):
            step = automorphism_matrix(alg, atom.params)
        elif isinstance(atom, ComplexConjugation):
            step = conjugation_matrix(alg)
        elif isinstance(atom, Shear):
            if filiform_kind(alg) != "real":
                raise MapError("shear maps live on the real filiform groups")
            x1 = Fraction(q.coords[0])
            try:
                slope = atom.profile.slope_at(x1)
            except PiecewiseError as exc:
                raise MapError(
                    f"tangent map undefined: profile slope jumps at "
                    f"x_1 = {x1}") from exc
            step = automorphism_matrix(alg, GradedAutoParams(1, 1, slope))
        else:
            raise MapError(f"unknown atom {atom!r}")
        if step is not None:
            mat = tuple(tuple(r) for r in mat_mul(step, mat))
        q = _apply_atom(alg, atom, q)
    return mat
