"""JSON forms for algebras, elements, maps, curves, paths, and CSV helpers.

Conventions, used consistently across every format here:

* exact rationals travel as strings "p/q" (or "p" when integral), so a round
  trip through JSON never loses precision; float values are emitted as plain
  JSON numbers and come back as floats
* complex parameters travel as two-element arrays ["re", "im"] of rational
  strings
* basis indices and layer ranges are 1-based and inclusive, matching the
  classical e_1..e_dim numbering used everywhere in the docs; internal 0-based
  half-open ranges never leak into a file
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional, Sequence, TextIO

from .algebra import AlgebraError, Element, GradedAlgebra, algebra_by_label
from .forms import ComplexPolynomial, Polyline
from .maps import (ComplexConjugation, GradedAuto, GradedAutoParams,
                   LeftTranslation, MapExpr, Shear, as_map)
from .metric import HorizontalPath
from .piecewise import PiecewisePolynomial, profile_from_pieces
from .scalars import (GaussianRational, format_rational, is_exact,
                      parse_rational)

__all__ = [
    "SerializeError",
    "canonical_dumps",
    "scalar_to_json",
    "scalar_from_json",
    "element_to_json",
    "element_from_json",
    "algebra_to_json",
    "algebra_from_json",
    "load_algebra",
    "map_to_json",
    "map_from_json",
    "curve_to_json",
    "curve_from_json",
    "curve_vertices_from_json",
    "gpoly_to_json",
    "gpoly_from_json",
    "path_to_json",
    "path_from_json",
    "write_distortion_csv",
    "DISTORTION_CSV_HEADER",
]


class SerializeError(ValueError):
    pass


def canonical_dumps(obj) -> str:
    """One fixed rendering per value, so identical runs emit identical bytes."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# === scalars ============================================================

def scalar_to_json(c):
    if is_exact(c):
        return format_rational(c)
    if isinstance(c, float):
        return c
    raise SerializeError(f"cannot serialize scalar {c!r}")


def scalar_from_json(v):
    if isinstance(v, str):
        try:
            return parse_rational(v)
        except ValueError as exc:
            raise SerializeError(f"bad rational string {v!r}") from exc
    if isinstance(v, bool):
        raise SerializeError(f"bad scalar {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    raise SerializeError(f"bad scalar {v!r}")


def _complex_to_json(c):
    if isinstance(c, GaussianRational):
        return [format_rational(c.re), format_rational(c.im)]
    return scalar_to_json(c)


def _complex_from_json(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise SerializeError(f"complex value needs [re, im], got {v!r}")
        re, im = (scalar_from_json(u) for u in v)
        if not (is_exact(re) and is_exact(im)):
            raise SerializeError("complex parts must be exact rationals")
        return GaussianRational.of(re, im)
    out = scalar_from_json(v)
    if not is_exact(out):
        raise SerializeError("map parameters must be exact")
    return out


def _field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise SerializeError(f"{where}: missing field {key!r}")
    return obj[key]


# === elements ===========================================================

def element_to_json(X: Element) -> dict:
    return {"algebra_label": X.algebra.label,
            "coords": [scalar_to_json(c) for c in X.coords]}


def element_from_json(obj: dict, alg: Optional[GradedAlgebra] = None) -> Element:
    label = _field(obj, "algebra_label", "element")
    if alg is None:
        alg = algebra_by_label(label)
    elif label != alg.label:
        raise SerializeError(f"element belongs to {label!r}, expected "
                             f"{alg.label!r}")
    coords = [scalar_from_json(c) for c in _field(obj, "coords", "element")]
    if len(coords) != alg.dim:
        raise SerializeError(f"element for {alg.label} needs {alg.dim} "
                             f"coordinates, got {len(coords)}")
    return Element(alg, tuple(coords))


# === algebras ===========================================================

def algebra_to_json(alg: GradedAlgebra) -> dict:
    brackets = [{"i": i + 1, "j": j + 1, "k": k + 1, "c": format_rational(c)}
                for i, j, k, c in alg._flat]
    return {"label": alg.label,
            "dim": alg.dim,
            "layers": [[lo + 1, hi] for lo, hi in alg.layers],
            "brackets": brackets}


def algebra_from_json(obj: dict) -> GradedAlgebra:
    label = _field(obj, "label", "algebra")
    dim = _field(obj, "dim", "algebra")
    layers = [(int(lo) - 1, int(hi))
              for lo, hi in _field(obj, "layers", "algebra")]
    table: dict = {}
    for row in _field(obj, "brackets", "algebra"):
        i = int(_field(row, "i", "bracket")) - 1
        j = int(_field(row, "j", "bracket")) - 1
        k = int(_field(row, "k", "bracket")) - 1
        c = scalar_from_json(_field(row, "c", "bracket"))
        if not is_exact(c):
            raise SerializeError("structure constants must be exact rationals")
        table.setdefault((i, j), {})[k] = Fraction(c)
    try:
        return GradedAlgebra(str(label), int(dim), layers, table)
    except AlgebraError as exc:
        raise SerializeError(f"invalid algebra file: {exc}") from exc


def load_algebra(name_or_path: str) -> GradedAlgebra:
    """Resolve a built-in label, or read a custom algebra JSON file."""
    try:
        return algebra_by_label(name_or_path)
    except AlgebraError:
        pass
    try:
        with open(name_or_path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise SerializeError(
            f"{name_or_path!r} is neither a known algebra label nor a "
            f"readable file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SerializeError(f"{name_or_path}: not valid JSON: {exc}") from exc
    return algebra_from_json(obj)


# === maps ===============================================================

def _profile_spans(profile: PiecewisePolynomial):
    bps = profile.breakpoints
    if not bps:
        raise SerializeError(
            "a single global polynomial profile has no finite-span file form; "
            "rebuild it with explicit pieces over [lo, hi] spans")
    for tail in (profile.pieces[0], profile.pieces[-1]):
        if tail.degree > 0:
            raise SerializeError(
                "profile tails must be constant to serialize; the file format "
                "clamps outside the outermost breakpoints")
    if len(bps) == 1:
        # globally constant by continuity; any span reproduces it
        value = profile.pieces[0](bps[0])
        return [(bps[0], bps[0] + 1, (value,))]
    return [(bps[t], bps[t + 1], profile.pieces[t + 1].coeffs)
            for t in range(len(bps) - 1)]


def map_to_json(m) -> dict:
    atoms = []
    for atom in as_map(m).atoms:
        if isinstance(atom, LeftTranslation):
            atoms.append({"type": "translation",
                          "g": element_to_json(atom.g)})
        elif isinstance(atom, GradedAuto):
            p = atom.params
            atoms.append({"type": "graded",
                          "a1": _complex_to_json(p.a1),
                          "a2": _complex_to_json(p.a2),
                          "b": _complex_to_json(p.b),
                          "tau": p.conjugated})
        elif isinstance(atom, ComplexConjugation):
            # tau alone is the trivial graded map with the flag set
            atoms.append({"type": "graded", "a1": "1", "a2": "1", "b": "0",
                          "tau": True})
        elif isinstance(atom, Shear):
            pieces = [{"lo": format_rational(lo),
                       "hi": format_rational(hi),
                       "coeffs": [format_rational(c) for c in coeffs]}
                      for lo, hi, coeffs in _profile_spans(atom.profile)]
            atoms.append({"type": "shear", "pieces": pieces})
        else:
            raise SerializeError(f"cannot serialize atom {atom!r}")
    return {"atoms": atoms}


def map_from_json(obj: dict, alg: Optional[GradedAlgebra] = None) -> MapExpr:
    atoms = []
    for raw in _field(obj, "atoms", "map"):
        kind = _field(raw, "type", "map atom")
        if kind == "translation":
            atoms.append(LeftTranslation(
                element_from_json(_field(raw, "g", "translation"), alg)))
        elif kind == "graded":
            params = GradedAutoParams(
                _complex_from_json(_field(raw, "a1", "graded map")),
                _complex_from_json(_field(raw, "a2", "graded map")),
                _complex_from_json(_field(raw, "b", "graded map")),
                conjugated=bool(raw.get("tau", False)))
            atoms.append(GradedAuto(params))
        elif kind == "shear":
            spans = []
            for piece in _field(raw, "pieces", "shear map"):
                lo = scalar_from_json(_field(piece, "lo", "shear piece"))
                hi = scalar_from_json(_field(piece, "hi", "shear piece"))
                coeffs = [scalar_from_json(c)
                          for c in _field(piece, "coeffs", "shear piece")]
                if not all(is_exact(c) for c in [lo, hi, *coeffs]):
                    raise SerializeError("shear pieces must be exact")
                spans.append((lo, hi, coeffs))
            try:
                profile = profile_from_pieces(spans)
            except ValueError as exc:
                raise SerializeError(f"bad shear profile: {exc}") from exc
            atoms.append(Shear(profile))
        else:
            raise SerializeError(f"unknown map atom type {kind!r}")
    return MapExpr(tuple(atoms))


# === curves and complex polynomials =====================================

def curve_to_json(c: Polyline) -> dict:
    return {"closed": c.closed,
            "vertices": [[scalar_to_json(x) for x in v] for v in c.vertices]}


def curve_vertices_from_json(obj: dict):
    """(closed, vertices) without binding to an algebra; width is unchecked."""
    closed = bool(_field(obj, "closed", "curve"))
    vertices = [tuple(scalar_from_json(x) for x in v)
                for v in _field(obj, "vertices", "curve")]
    return closed, vertices


def curve_from_json(obj: dict, alg: GradedAlgebra) -> Polyline:
    closed, vertices = curve_vertices_from_json(obj)
    return Polyline(alg, tuple(vertices), closed)


def gpoly_to_json(g: ComplexPolynomial) -> dict:
    return {"terms": [{"a": a, "b": b, "c": _complex_to_json(c)}
                      for a, b, c in g.terms]}


def gpoly_from_json(obj: dict) -> ComplexPolynomial:
    terms = []
    for row in _field(obj, "terms", "polynomial"):
        a = int(_field(row, "a", "term"))
        b = int(_field(row, "b", "term"))
        c = _complex_from_json(_field(row, "c", "term"))
        terms.append((a, b, c))
    return ComplexPolynomial.make(terms)


# === horizontal paths ===================================================

def path_to_json(path: HorizontalPath) -> dict:
    return {"controls": [[format_rational(c) for c in u]
                         for u in path.controls],
            "length": path.length()}


def path_from_json(obj: dict, alg: GradedAlgebra) -> HorizontalPath:
    controls = []
    for u in _field(obj, "controls", "path"):
        row = [scalar_from_json(c) for c in u]
        if not all(is_exact(c) for c in row):
            raise SerializeError("path controls must be exact rationals")
        controls.append(tuple(row))
    return HorizontalPath(alg, tuple(controls))


# === CSV ================================================================

DISTORTION_CSV_HEADER = ("scale", "d(p,q)", "d(F(p),F(q))", "ratio")


def write_distortion_csv(fh: TextIO, rows: Sequence[tuple]) -> None:
    fh.write(",".join(DISTORTION_CSV_HEADER) + "\n")
    for scale, d_pq, d_f, ratio in rows:
        fh.write(f"{scale!r},{d_pq!r},{d_f!r},{ratio!r}\n")
