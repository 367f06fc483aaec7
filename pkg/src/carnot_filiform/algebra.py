"""Graded nilpotent Lie algebras with exact sparse structure constants.

A stratified algebra is V_1 + ... + V_r with [V_1, V_i] = V_{i+1}.  Basis
indices are 0-based internally; the classical numbering e_1..e_{dim} maps to
indices 0..dim-1.  Three families are built in:

* filiform real, label ``fr{n}``: basis e_1..e_{n+1}, nonzero brackets
  [e_1, e_j] = e_{j+1} for 2 <= j <= n, layers span(e_1,e_2), span(e_3), ...
* filiform complex as real, label ``fc{n}``: complex basis realified in the
  interleaved order e_1, i e_1, e_2, i e_2, ...; multiplication by i is kept
  as the pairing table ``complex_pairs``.
* complex Heisenberg as real, label ``hc{n}``: X_k, iX_k, Y_k, iY_k, Z, iZ
  with [X_k, Y_k] = Z realified the same way.

Group elements are identified with algebra elements through exponential
coordinates; the group side lives in :mod:`carnot_filiform.bch`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import exact_rank
from .scalars import Scalar, is_exact, require_exact


class AlgebraError(ValueError):
    """Structural problem: mismatched algebras, bad coordinates, bad label."""


@dataclass(frozen=True)
class Element:
    """Point of the algebra (equivalently of the group, via exp coordinates)."""

    algebra: "GradedAlgebra"
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.algebra.dim:
            raise AlgebraError(
                f"expected {self.algebra.dim} coordinates, got {len(self.coords)}")

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coords)

    def __add__(self, other: "Element") -> "Element":
        self.algebra.check_same(other.algebra)
        return Element(self.algebra,
                       tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        self.algebra.check_same(other.algebra)
        return Element(self.algebra,
                       tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Element":
        return Element(self.algebra, tuple(-a for a in self.coords))

    def scale(self, t: Scalar) -> "Element":
        return Element(self.algebra, tuple(t * a for a in self.coords))

    __rmul__ = scale

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


class GradedAlgebra:
    """Stratified Lie algebra with a sparse exact bracket table.

    ``table`` holds only pairs i < j; antisymmetry is implicit.  ``layers``
    are half-open 0-based index ranges, one per stratum.
    """

    def __init__(self, label: str, dim: int,
                 layers: Sequence[tuple[int, int]],
                 table: dict,
                 complex_pairs: Optional[tuple] = None,
                 validate: bool = True):
        self.label = label
        self.dim = dim
        self.layers = tuple((int(a), int(b)) for a, b in layers)
        self.table = {k: dict(v) for k, v in table.items()}
        self.complex_pairs = complex_pairs
        self.step = len(self.layers)
        weights = [0] * dim
        for depth, (lo, hi) in enumerate(self.layers, start=1):
            for i in range(lo, hi):
                weights[i] = depth
        self.weights = tuple(weights)
        # flat view of the table for tight bracket loops
        self._flat = tuple((i, j, k, Fraction(c))
                           for (i, j), row in sorted(self.table.items())
                           for k, c in sorted(row.items()))
        self._hash = hash((self.label, self.dim, self.layers))
        if validate:
            self.validate()

    # --- identity -------------------------------------------------------

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, GradedAlgebra)
                and self.label == other.label
                and self.dim == other.dim
                and self.layers == other.layers
                and self._flat == other._flat)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"GradedAlgebra({self.label!r}, dim={self.dim}, step={self.step})"

    def check_same(self, other: "GradedAlgebra") -> None:
        if self != other:
            raise AlgebraError(f"algebra mismatch: {self.label} vs {other.label}")

    # --- element factories ---------------------------------------------

    def element(self, coords: Sequence[Scalar]) -> Element:
        return Element(self, tuple(coords))

    def zero(self) -> Element:
        return Element(self, (Fraction(0),) * self.dim)

    def basis(self, index: int) -> Element:
        """Basis element by 0-based index."""
        if not 0 <= index < self.dim:
            raise AlgebraError(f"basis index {index} out of range for dim {self.dim}")
        return Element(self, tuple(Fraction(1) if i == index else Fraction(0)
                                   for i in range(self.dim)))

    def e(self, classical: int) -> Element:
        """Basis element by its classical 1-based number e_1..e_dim."""
        return self.basis(classical - 1)

    # --- structure ------------------------------------------------------

    def layer_of(self, index: int) -> int:
        return self.weights[index]

    def layer_slice(self, depth: int) -> tuple[int, int]:
        return self.layers[depth - 1]

    @property
    def v1_dim(self) -> int:
        lo, hi = self.layers[0]
        return hi - lo

    def bracket_coords(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> list:
        out = [0] * self.dim
        for i, j, k, c in self._flat:
            v = x[i] * y[j] - x[j] * y[i]
            if v:
                out[k] += c * v
        return out

    def bracket(self, X: Element, Y: Element) -> Element:
        self.check_same(X.algebra)
        self.check_same(Y.algebra)
        return Element(self, tuple(self.bracket_coords(X.coords, Y.coords)))

    def ad_matrix(self, X: Element) -> list[list]:
        """Matrix of ad(X): column j holds [X, e_{j+1}] in basis coordinates."""
        self.check_same(X.algebra)
        cols = []
        for j in range(self.dim):
            unit = [1 if i == j else 0 for i in range(self.dim)]
            cols.append(self.bracket_coords(X.coords, unit))
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def dilate(self, t: Scalar, X: Element) -> Element:
        """Dilation: multiply layer-i coordinates by t^i.  Requires t > 0."""
        self.check_same(X.algebra)
        if not t > 0:
            raise AlgebraError(f"dilation factor must be positive, got {t!r}")
        return Element(self, tuple(t ** self.weights[i] * c
                                   for i, c in enumerate(X.coords)))

    def tau_coords(self, coords: Sequence[Scalar]) -> tuple:
        """Complex conjugation on a realified complex algebra."""
        if self.complex_pairs is None:
            raise AlgebraError(f"{self.label} carries no complex structure")
        out = list(coords)
        for _, im in self.complex_pairs:
            out[im] = -out[im]
        return tuple(out)

    def complex_coord(self, coords: Sequence[Scalar], pair_index: int):
        """Complex coordinate number pair_index (0-based) as (re, im)."""
        if self.complex_pairs is None:
            raise AlgebraError(f"{self.label} carries no complex structure")
        re_i, im_i = self.complex_pairs[pair_index]
        return coords[re_i], coords[im_i]

    # --- validation -----------------------------------------------------

    def validate(self) -> None:
        dim = self.dim
        if self.layers[0][0] != 0 or self.layers[-1][1] != dim:
            raise AlgebraError("layers must tile 0..dim")
        for (a, b), (c, d) in zip(self.layers, self.layers[1:]):
            if b != c:
                raise AlgebraError("layers must be contiguous")
        for (i, j), row in self.table.items():
            if not i < j:
                raise AlgebraError("bracket table must be stored with i < j")
            for k, c in row.items():
                if c == 0:
                    continue
                if self.weights[k] != self.weights[i] + self.weights[j]:
                    raise AlgebraError(
                        f"bracket [e_{i+1}, e_{j+1}] leaves the grading at e_{k+1}")
        self._check_jacobi()
        self._check_generating()

    def _check_jacobi(self) -> None:
        dim = self.dim
        units = [[1 if i == j else 0 for i in range(dim)] for j in range(dim)]
        for a in range(dim):
            for b in range(a + 1, dim):
                ab = self.bracket_coords(units[a], units[b])
                for c in range(b + 1, dim):
                    bc = self.bracket_coords(units[b], units[c])
                    ca = self.bracket_coords(units[c], units[a])
                    total = [x + y + z for x, y, z in
                             (zip(self.bracket_coords(ab, units[c]),
                                  self.bracket_coords(bc, units[a]),
                                  self.bracket_coords(ca, units[b])))]
                    if any(v != 0 for v in total):
                        raise AlgebraError(
                            f"Jacobi identity fails on (e_{a+1}, e_{b+1}, e_{c+1})")

    def _check_generating(self) -> None:
        # [V_1, V_i] must span V_{i+1}
        lo1, hi1 = self.layers[0]
        for depth in range(1, self.step):
            loi, hii = self.layers[depth - 1]
            lon, hin = self.layers[depth]
            rows = []
            for i in range(lo1, hi1):
                ui = [1 if t == i else 0 for t in range(self.dim)]
                for j in range(loi, hii):
                    uj = [1 if t == j else 0 for t in range(self.dim)]
                    br = self.bracket_coords(ui, uj)
                    rows.append(br[lon:hin])
            if exact_rank(rows) != hin - lon:
                raise AlgebraError(
                    f"[V_1, V_{depth}] does not span V_{depth + 1}")


# === constructors =======================================================

_CACHE: dict[str, GradedAlgebra] = {}


def make_filiform_real(n: int) -> GradedAlgebra:
    """Model filiform algebra over R of step n, dimension n + 1."""
    if n < 2:
        raise AlgebraError(f"filiform step must be >= 2, got {n}")
    label = f"fr{n}"
    if label not in _CACHE:
        table = {(0, j): {j + 1: Fraction(1)} for j in range(1, n)}
        layers = [(0, 2)] + [(i, i + 1) for i in range(2, n + 1)]
        _CACHE[label] = GradedAlgebra(label, n + 1, layers, table)
    return _CACHE[label]


def make_filiform_complex_as_real(n: int) -> GradedAlgebra:
    """Model filiform algebra over C of step n, realified; dimension 2(n+1)."""
    if n < 2:
        raise AlgebraError(f"filiform step must be >= 2, got {n}")
    label = f"fc{n}"
    if label not in _CACHE:
        table: dict = {}
        for j in range(2, n + 1):
            re_j, im_j = 2 * (j - 1), 2 * (j - 1) + 1
            re_n, im_n = 2 * j, 2 * j + 1
            table[(0, re_j)] = {re_n: Fraction(1)}
            table[(0, im_j)] = {im_n: Fraction(1)}
            table[(1, re_j)] = {im_n: Fraction(1)}
            table[(1, im_j)] = {re_n: Fraction(-1)}
        layers = [(0, 4)] + [(2 * j, 2 * j + 2) for j in range(2, n + 1)]
        pairs = tuple((2 * k, 2 * k + 1) for k in range(n + 1))
        _CACHE[label] = GradedAlgebra(label, 2 * (n + 1), layers, table,
                                      complex_pairs=pairs)
    return _CACHE[label]


def make_complex_heisenberg_as_real(n: int) -> GradedAlgebra:
    """Complex Heisenberg group of complex dimension 2n+1, realified.

    Real dimension 4n + 2; the first layer holds X_k, iX_k, Y_k, iY_k for
    k = 1..n and the center holds Z, iZ.
    """
    if n < 1:
        raise AlgebraError(f"Heisenberg index must be >= 1, got {n}")
    label = f"hc{n}"
    if label not in _CACHE:
        z, iz = 4 * n, 4 * n + 1
        table: dict = {}
        for k in range(n):
            x, ix, y, iy = 4 * k, 4 * k + 1, 4 * k + 2, 4 * k + 3
            table[(x, y)] = {z: Fraction(1)}
            table[(x, iy)] = {iz: Fraction(1)}
            table[(ix, y)] = {iz: Fraction(1)}
            table[(ix, iy)] = {z: Fraction(-1)}
        layers = [(0, 4 * n), (4 * n, 4 * n + 2)]
        pairs = tuple((2 * k, 2 * k + 1) for k in range(2 * n + 1))
        _CACHE[label] = GradedAlgebra(label, 4 * n + 2, layers, table,
                                      complex_pairs=pairs)
    return _CACHE[label]


_LABEL_RE = re.compile(r"^(fr|fc|hc)(\d+)$")


def algebra_by_label(label: str) -> GradedAlgebra:
    m = _LABEL_RE.match(label.strip().lower())
    if not m:
        raise AlgebraError(f"unknown algebra label {label!r} (expected fr<n>, fc<n>, hc<n>)")
    kind, n = m.group(1), int(m.group(2))
    if kind == "fr":
        return make_filiform_real(n)
    if kind == "fc":
        return make_filiform_complex_as_real(n)
    return make_complex_heisenberg_as_real(n)


# === filiform-specific structure ========================================

def filiform_kind(alg: GradedAlgebra) -> Optional[str]:
    if re.match(r"^fr\d+$", alg.label):
        return "real"
    if re.match(r"^fc\d+$", alg.label):
        return "complex"
    return None


def filiform_n(alg: GradedAlgebra) -> int:
    kind = filiform_kind(alg)
    if kind is None:
        raise AlgebraError(f"{alg.label} is not a model filiform algebra")
    return alg.step


def horizontal_indices(alg: GradedAlgebra) -> tuple[int, ...]:
    """Indices of the cyclic generator line: e_1 (and i e_1 when complex)."""
    kind = filiform_kind(alg)
    if kind == "real":
        return (0,)
    if kind == "complex":
        return (0, 1)
    raise AlgebraError(f"{alg.label} has no distinguished generator line")


def ideal_indices(alg: GradedAlgebra) -> tuple[int, ...]:
    """Indices spanning the abelian ideal complementary to the generator line."""
    gen = set(horizontal_indices(alg))
    return tuple(i for i in range(alg.dim) if i not in gen)


def in_abelian_ideal(alg: GradedAlgebra, X: Element) -> bool:
    return all(X.coords[i] == 0 for i in horizontal_indices(alg))


# === pointwise operations ==============================================

def rank(alg: GradedAlgebra, X: Element) -> int:
    """Exact rank of ad(X).  Rejects float coordinates."""
    alg.check_same(X.algebra)
    require_exact(X.coords, "rank")
    return exact_rank(alg.ad_matrix(X))
