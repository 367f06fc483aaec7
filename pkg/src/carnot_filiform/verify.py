"""Bundled verification suites behind `carnot-filiform verify`.

Each suite function draws its own deterministic random stream, runs a fixed
roster of checks, and returns a :class:`Report`.  Default arguments ARE the
acceptance configuration: calling a suite with no overrides reproduces the
run the acceptance tests score, and the same seed always yields byte-identical
reports (elapsed is pinned to 0.0 unless timings are requested).
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List

from .algebra import (Element, GradedAlgebra, algebra_by_label, rank)
from .bch import (abelian_tail_product, bch_coefficients,
                  conjugate_by_horizontal, dynkin_product, group_inverse,
                  group_product)
from .distortion import distortion_sample
from .forms import (ComplexPolynomial, Polyline, alpha_integral,
                    horizontal_lift, morera_defect, omega)
from .maps import (GradedAuto, GradedAutoParams, LeftTranslation, MapExpr,
                   Rejection, Shear, apply_map, automorphism_matrix,
                   classify_graded_automorphism, invert_map,
                   predicted_differential)
from .metric import (carnot_distance_upper, homogeneous_distance,
                     homogeneous_norm, measure_quasi_triangle_constant,
                     unit_sphere_point)
from .pansu import pansu_differential_estimate
from .piecewise import profile_from_pieces
from .scalars import GaussianRational, format_rational

__all__ = ["Report", "SUITES", "run_suite", "suite_names"]

AXIOM_ROSTER = ("fr2", "fr3", "fr4", "fr5", "fr6", "fc3", "hc1")
FILIFORM_ROSTER = ("fr2", "fr3", "fr4", "fr5", "fr6", "fc2", "fc3")


@dataclass
class Report:
    suite: str
    cases: int
    failures: List[dict]
    elapsed: float
    seed: int
    invocation: str
    data: Dict[str, object] = field(default_factory=dict)
    # non-serialized payloads for figure rendering
    artifacts: Dict[str, object] = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"suite": self.suite,
                "cases": self.cases,
                "failures": self.failures,
                "elapsed": self.elapsed,
                "seed": self.seed,
                "invocation": self.invocation,
                "data": self.data}


class _Run:
    """Collects case results; keeps failure records JSON-clean."""

    def __init__(self):
        self.cases = 0
        self.failures: List[dict] = []

    def check(self, label: str, expected, got) -> None:
        self.cases += 1
        if expected != got:
            self.failures.append({"input": label,
                                  "expected": str(expected),
                                  "got": str(got)})

    def check_true(self, label: str, condition: bool, detail: str = "") -> None:
        self.cases += 1
        if not condition:
            self.failures.append({"input": label,
                                  "expected": "condition holds",
                                  "got": detail or "condition failed"})


def _rand_coords(rng: random.Random, dim: int) -> list:
    return [Fraction(rng.randint(-8, 8), rng.randint(1, 5)) for _ in range(dim)]


def _rand_element(rng: random.Random, alg: GradedAlgebra) -> Element:
    return alg.element(_rand_coords(rng, alg.dim))


def _short(X: Element) -> str:
    return "(" + ", ".join(format_rational(c) if not isinstance(c, float)
                           else repr(c) for c in X.coords) + ")"


# === group-axioms =======================================================

def suite_group_axioms(seed: int = 0, triples: int = 500,
                       roster=AXIOM_ROSTER) -> tuple:
    run = _Run()
    for label in roster:
        alg = algebra_by_label(label)
        rng = random.Random(f"{seed}:axioms:{label}")
        o = alg.zero()
        for i in range(triples):
            x = _rand_element(rng, alg)
            y = _rand_element(rng, alg)
            z = _rand_element(rng, alg)
            tag = f"{label} triple #{i}"
            ok = (group_product(alg, x, o).coords == x.coords
                  and group_product(alg, o, x).coords == x.coords)
            ok = ok and group_product(alg, x, group_inverse(x)).coords == o.coords
            left = group_product(alg, group_product(alg, x, y), z)
            right = group_product(alg, x, group_product(alg, y, z))
            ok = ok and left.coords == right.coords
            run.check_true(tag, ok,
                           f"axiom violation at x={_short(x)} y={_short(y)} "
                           f"z={_short(z)}")
    return run, {}


# === bch-coeffs =========================================================

def suite_bch_coeffs(seed: int = 0, pairs: int = 500,
                     roster=FILIFORM_ROSTER) -> tuple:
    run = _Run()
    for label in roster:
        alg = algebra_by_label(label)
        rng = random.Random(f"{seed}:bch:{label}")
        # abelian ideal = everything with zero generator-line coordinates;
        # for fr* that is e_1, for fc* the pair (e_1, i e_1)
        line_width = 1 if label.startswith("fr") else 2
        for i in range(pairs):
            x = _rand_element(rng, alg)
            yc = _rand_coords(rng, alg.dim)
            for j in range(line_width):
                yc[j] = Fraction(0)
            y = alg.element(yc)
            got = abelian_tail_product(alg, x, y)
            want = dynkin_product(alg, x, y)
            run.check(f"{label} pair #{i} x={_short(x)} y={_short(y)}",
                      want.coords, got.coords)
    coeffs = bch_coefficients(6)
    run.check("tail coefficient c_2", Fraction(1, 12), coeffs[2])
    return run, {"c_2": format_rational(coeffs[2]),
                 "tail_coefficients": {str(j): format_rational(c)
                                       for j, c in sorted(coeffs.items())}}


# === conjugation ========================================================

def _interpolate_exact(nodes: list, values: list) -> list:
    """Coefficients (low degree first) of the unique interpolating polynomial."""
    m = len(nodes)
    # Newton form, then expand; everything Fraction-exact
    divided = list(values)
    for level in range(1, m):
        for i in range(m - 1, level - 1, -1):
            divided[i] = (divided[i] - divided[i - 1]) / (nodes[i] - nodes[i - level])
    coeffs = [Fraction(0)] * m
    acc = [Fraction(1)]            # product (t - n_0)...(t - n_{k-1})
    for k in range(m):
        for d, c in enumerate(acc):
            coeffs[d] += divided[k] * c
        nxt = [Fraction(0)] * (len(acc) + 1)
        for d, c in enumerate(acc):
            nxt[d] -= nodes[k] * c
            nxt[d + 1] += c
        acc = nxt
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def suite_conjugation(seed: int = 0, vectors: int = 50,
                      ns=(3, 4, 5)) -> tuple:
    run = _Run()
    for n in ns:
        alg = algebra_by_label(f"fr{n}")
        rng = random.Random(f"{seed}:conj:{n}")
        nodes = [Fraction(t) for t in range(alg.step + 1)]
        for i in range(vectors):
            yc = _rand_coords(rng, alg.dim)
            yc[0] = Fraction(0)
            y = alg.element(yc)
            tables = [conjugate_by_horizontal(alg, t, y).coords for t in nodes]
            ok = True
            detail = ""
            for j in range(1, alg.dim):     # coordinates x_2 .. x_{n+1}
                vals = [row[j] for row in tables]
                poly = _interpolate_exact(nodes, vals)
                const = poly[0] if poly else Fraction(0)
                lin = poly[1] if len(poly) > 1 else Fraction(0)
                expect_lin = -yc[j - 1] if j >= 2 else Fraction(0)
                if const != yc[j] or lin != expect_lin:
                    ok = False
                    detail = (f"coordinate {j + 1}: constant {const} "
                              f"(want {yc[j]}), linear {lin} "
                              f"(want {expect_lin})")
                    break
            run.check_true(f"fr{n} interpolation #{i}", ok, detail)
    # closed form on fr3: x'_4 = x_4 - t x_3 + t^2/2 x_2, x'_3 = x_3 - t x_2
    alg = algebra_by_label("fr3")
    rng = random.Random(f"{seed}:conj:closed")
    for i in range(vectors):
        yc = _rand_coords(rng, alg.dim)
        yc[0] = Fraction(0)
        t = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        got = conjugate_by_horizontal(alg, t, alg.element(yc)).coords
        want = (Fraction(0), yc[1],
                yc[2] - t * yc[1],
                yc[3] - t * yc[2] + t * t / 2 * yc[1])
        run.check(f"fr3 closed form #{i} t={format_rational(t)}", want, got)
    return run, {}


# === rank ===============================================================

def suite_rank(seed: int = 0, vectors: int = 200, ns=(3, 4, 5)) -> tuple:
    run = _Run()
    for n in ns:
        ralg = algebra_by_label(f"fr{n}")
        rng = random.Random(f"{seed}:rank:fr{n}")
        for i in range(vectors):
            a = Fraction(0) if i % 2 == 0 else Fraction(rng.randint(1, 9),
                                                        rng.randint(1, 4))
            if a and rng.random() < 0.5:
                a = -a
            b = Fraction(rng.randint(1, 9), rng.randint(1, 4))
            if rng.random() < 0.5:
                b = -b
            coords = [Fraction(0)] * ralg.dim
            coords[0], coords[1] = a, b
            r = rank(ralg, ralg.element(coords))
            run.check(f"fr{n} vector #{i} a={format_rational(a)}",
                      a == 0, r == 1)
        calg = algebra_by_label(f"fc{n}")
        rng = random.Random(f"{seed}:rank:fc{n}")
        for i in range(vectors):
            if i % 2 == 0:
                are = aim = Fraction(0)
            else:
                are = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                aim = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                if are == 0 and aim == 0:
                    are = Fraction(1)
            bre = Fraction(rng.randint(1, 9), rng.randint(1, 4))
            bim = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            coords = [Fraction(0)] * calg.dim
            coords[0], coords[1], coords[2], coords[3] = are, aim, bre, bim
            r = rank(calg, calg.element(coords))
            run.check(f"fc{n} vector #{i} a={format_rational(are)}"
                      f"+{format_rational(aim)}i",
                      are == 0 and aim == 0, r == 2)
    return run, {}


# === dilation (and the metric invariants that ride along) ===============

DILATION_FACTORS = (Fraction(1, 4), Fraction(1, 2), Fraction(2), Fraction(4))


def suite_dilation(seed: int = 0, pairs: int = 1000,
                   roster=AXIOM_ROSTER) -> tuple:
    run = _Run()
    rng = random.Random(f"{seed}:dilation")
    algs = [algebra_by_label(label) for label in roster]
    for i in range(pairs):
        alg = algs[i % len(algs)]
        p = _rand_element(rng, alg)
        q = _rand_element(rng, alg)
        d = homogeneous_distance(alg, p, q)
        tag = f"{alg.label} pair #{i}"
        ok = True
        detail = ""
        for t in DILATION_FACTORS:
            dt = homogeneous_distance(alg, alg.dilate(t, p), alg.dilate(t, q))
            if abs(dt - float(t) * d) > 1e-12 * float(t) * d:
                ok = False
                detail = f"t={t}: {dt} vs {float(t) * d}"
                break
        run.check_true(f"{tag} dilation similarity", ok, detail)
        g = _rand_element(rng, alg)
        dl = homogeneous_distance(alg, group_product(alg, g, p),
                                  group_product(alg, g, q))
        run.check_true(f"{tag} left invariance",
                       abs(dl - d) <= 1e-12 * max(d, 1.0),
                       f"{dl} vs {d}")
        run.check_true(f"{tag} symmetry",
                       abs(homogeneous_distance(alg, q, p) - d)
                       <= 1e-12 * max(d, 1.0), "d(q,p) != d(p,q)")
    c_tri = {label: measure_quasi_triangle_constant(algebra_by_label(label),
                                                    samples=200, seed=seed)
             for label in roster}
    return run, {"quasi_triangle_constants": c_tri}


# === automorphisms ======================================================

def _rand_nonzero_fraction(rng: random.Random) -> Fraction:
    f = Fraction(rng.randint(1, 6), rng.randint(1, 3))
    return -f if rng.random() < 0.5 else f


def _rand_auto_params(rng: random.Random, complex_case: bool) -> GradedAutoParams:
    if complex_case:
        a1 = GaussianRational.of(_rand_nonzero_fraction(rng),
                                 Fraction(rng.randint(-3, 3)))
        a2 = GaussianRational.of(_rand_nonzero_fraction(rng),
                                 Fraction(rng.randint(-3, 3)))
        b = GaussianRational.of(Fraction(rng.randint(-4, 4)),
                                Fraction(rng.randint(-4, 4)))
        return GradedAutoParams(a1, a2, b, conjugated=rng.random() < 0.5)
    return GradedAutoParams(_rand_nonzero_fraction(rng),
                            _rand_nonzero_fraction(rng),
                            Fraction(rng.randint(-6, 6), rng.randint(1, 3)))


def _b_slots(alg: GradedAlgebra) -> set:
    if alg.complex_pairs is None:
        return {(1, 0)}
    return {(2, 0), (2, 1), (3, 0), (3, 1)}


AUTO_ROSTER = ("fr3", "fr4", "fr5", "fc3")


def suite_automorphisms(seed: int = 0, candidates: int = 1000,
                        roster=AUTO_ROSTER) -> tuple:
    run = _Run()
    rng = random.Random(f"{seed}:autos")
    algs = [algebra_by_label(label) for label in roster]
    for i in range(candidates):
        alg = algs[i % len(algs)]
        complex_case = alg.complex_pairs is not None
        params = _rand_auto_params(rng, complex_case)
        matrix = [list(row) for row in automorphism_matrix(alg, params)]
        tag = f"{alg.label} candidate #{i}"
        if i % 2 == 0:
            out = classify_graded_automorphism(alg, matrix)
            if isinstance(out, Rejection):
                run.check_true(f"{tag} (in family)", False,
                               f"rejected {out.condition}: {out.detail}")
            else:
                run.check(f"{tag} (in family)",
                          automorphism_matrix(alg, params),
                          automorphism_matrix(alg, out))
        else:
            excluded = _b_slots(alg)
            while True:
                r = rng.randrange(alg.dim)
                c = rng.randrange(alg.dim)
                if (r, c) not in excluded:
                    break
            matrix[r][c] = matrix[r][c] + _rand_nonzero_fraction(rng)
            out = classify_graded_automorphism(alg, matrix)
            run.check_true(f"{tag} (perturbed at {r},{c})",
                           isinstance(out, Rejection),
                           f"accepted perturbed matrix as {out}")
    return run, {}


# === shear-roundtrip ====================================================

def _rand_profile(rng: random.Random):
    from .piecewise import Polynomial
    cuts = sorted(rng.sample(range(-6, 7), rng.randint(2, 4)))
    spans = []
    level = Fraction(rng.randint(-3, 3))
    for lo, hi in zip(cuts, cuts[1:]):
        deg = rng.randint(0, 3)
        coeffs = [Fraction(0)] + [Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                                  for _ in range(deg)]
        # pin the constant so the seams are continuous
        coeffs[0] = level - Polynomial.make(coeffs)(Fraction(lo))
        spans.append((Fraction(lo), Fraction(hi), coeffs))
        level = Polynomial.make(coeffs)(Fraction(hi))
    return profile_from_pieces(spans)


def suite_shear_roundtrip(seed: int = 0, points: int = 1000,
                          ns=(3, 4, 5), profiles_per_n: int = 20) -> tuple:
    run = _Run()
    table = {}
    for n in ns:
        rng = random.Random(f"{seed}:shear:profiles:{n}")
        table[n] = [MapExpr((Shear(_rand_profile(rng)),))
                    for _ in range(profiles_per_n)]
    rng = random.Random(f"{seed}:shear:points")
    for i in range(points):
        n = ns[i % len(ns)]
        alg = algebra_by_label(f"fr{n}")
        m = table[n][(i // len(ns)) % profiles_per_n]
        p = _rand_element(rng, alg)
        back = apply_map(alg, invert_map(m), apply_map(alg, m, p))
        run.check(f"fr{n} point #{i} p={_short(p)}", p.coords, back.coords)
    return run, {}


# === pansu ==============================================================

def suite_pansu(seed: int = 0) -> tuple:
    run = _Run()
    alg = algebra_by_label("fr3")
    ramp = profile_from_pieces([(Fraction(-100), Fraction(100), (0, 1))])
    shear = MapExpr((Shear(ramp),))
    est = pansu_differential_estimate(alg, shear, alg.zero())
    target = automorphism_matrix(
        alg, GradedAutoParams(Fraction(1), Fraction(1), Fraction(1)))
    err = 0.0
    if est.matrix is None:
        run.check_true("shear differential at o", False,
                       f"no matrix, flags {est.flags}")
    else:
        err = max(abs(float(est.matrix[r][c]) - float(target[r][c]))
                  for r in range(alg.dim) for c in range(alg.dim))
        run.check_true("shear differential at o matches h_{1,1,1}",
                       err <= 1e-4, f"max entry error {err}")
    mono_ok = True
    mono_detail = ""
    for direction, rs in zip(est.directions, est.residuals):
        for a, b in zip(rs, rs[1:]):
            # scales decrease left to right, so residuals must too
            if b > a + 1e-15:
                mono_ok = False
                mono_detail = f"direction {_short(direction)}: {rs}"
    run.check_true("residuals decrease across scales", mono_ok, mono_detail)
    run.check("classification of the estimate",
              GradedAutoParams(Fraction(1), Fraction(1), Fraction(1)),
              est.classification)

    # chain rule on a composite word at a nonzero base point
    word = MapExpr((LeftTranslation(alg.element([Fraction(1, 2), Fraction(-1),
                                                 Fraction(1, 3), Fraction(2)])),
                    GradedAuto(GradedAutoParams(Fraction(2), Fraction(1, 2),
                                                Fraction(-1))),
                    Shear(ramp)))
    p = alg.element([Fraction(1, 3), Fraction(1), Fraction(-2), Fraction(1, 5)])
    est2 = pansu_differential_estimate(alg, word, p)
    predicted = predicted_differential(alg, word, p)
    if est2.matrix is None:
        run.check_true("chain rule composite", False,
                       f"no matrix, flags {est2.flags}")
        err2 = math.inf
    else:
        err2 = max(abs(float(est2.matrix[r][c]) - float(predicted[r][c]))
                   for r in range(alg.dim) for c in range(alg.dim))
        run.check_true("chain rule composite", err2 <= 1e-4,
                       f"max entry error {err2}")
    data = {"estimator_max_error": err,
            "chain_rule_max_error": err2,
            "scales": [format_rational(s) for s in est.scales]}
    return run, data, {"pansu_estimate": est}


# === lift-criterion (and Morera) ========================================

def _rand_closed_polygon(rng: random.Random, alg: GradedAlgebra,
                         max_vertices: int = 8) -> Polyline:
    v1 = alg.v1_dim
    k = rng.randint(3, max_vertices)
    verts = [tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                   for _ in range(v1)) for _ in range(k)]
    verts.append(verts[0])
    return Polyline(alg, tuple(verts), closed=True)


def suite_lift_criterion(seed: int = 0, polygons: int = 100) -> tuple:
    run = _Run()
    alg = algebra_by_label("hc1")
    rng = random.Random(f"{seed}:lift")
    half = Fraction(1, 2)
    for i in range(polygons):
        c = _rand_closed_polygon(rng, alg)
        lift = horizontal_lift(alg, c)
        ai = alpha_integral(alg, c)
        run.check(f"hc1 polygon #{i} defect = half contour integral",
                  tuple(half * v for v in ai.coords), lift.defect.coords)
    # degenerate out-and-back loop encloses nothing
    v1 = alg.v1_dim
    a = tuple(Fraction(0) for _ in range(v1))
    b = tuple(Fraction(1) if i == 0 else Fraction(2) for i in range(v1))
    c = tuple(Fraction(-3) if i == 1 else Fraction(1) for i in range(v1))
    loop = Polyline(alg, (a, b, c, b, a), closed=True)
    lift = horizontal_lift(alg, loop)
    run.check_true("degenerate loop has zero defect",
                   lift.defect.is_zero(), _short(lift.defect))
    # unit square in the Heisenberg plane
    h = algebra_by_label("fr2")
    sq = Polyline(h, ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
                      (Fraction(1), Fraction(1)), (Fraction(0), Fraction(1)),
                      (Fraction(0), Fraction(0))), closed=True)
    run.check("unit square defect", h.e(3).coords,
              horizontal_lift(h, sq).defect.coords)
    # the 2-form is the exterior derivative picture: alpha over the boundary
    # of the parallelogram spanned by (x, y) equals 2 omega(x, y)
    rng2 = random.Random(f"{seed}:lift:stokes")
    for i in range(20):
        x = tuple(Fraction(rng2.randint(-4, 4), rng2.randint(1, 3))
                  for _ in range(v1))
        y = tuple(Fraction(rng2.randint(-4, 4), rng2.randint(1, 3))
                  for _ in range(v1))
        zero = tuple(Fraction(0) for _ in range(v1))
        xy = tuple(u + v for u, v in zip(x, y))
        par = Polyline(alg, (zero, x, xy, y, zero), closed=True)
        run.check(f"parallelogram #{i} contour = 2 omega",
                  tuple(2 * v for v in omega(alg, x, y).coords),
                  alpha_integral(alg, par).coords)
        rev = alpha_integral(alg, par.reversed())
        run.check(f"parallelogram #{i} reversal flips sign",
                  tuple(-v for v in alpha_integral(alg, par).coords),
                  rev.coords)

    # Morera-style contour integrals over the unit square
    square = [GaussianRational.of(0), GaussianRational.of(1),
              GaussianRational.of(1, 1), GaussianRational.of(0, 1),
              GaussianRational.of(0)]
    wbar = ComplexPolynomial.make([(0, 1, GaussianRational.of(1))])
    run.check("contour of conj(w) over unit square",
              GaussianRational.of(0, 2), morera_defect(wbar, square))
    wsq = ComplexPolynomial.make([(2, 0, GaussianRational.of(1))])
    run.check("contour of w^2 vanishes", GaussianRational.of(0),
              morera_defect(wsq, square))
    affine = ComplexPolynomial.make([(0, 0, GaussianRational.of(3, -2)),
                                     (1, 0, GaussianRational.of(-1, 5))])
    run.check("contour of affine w vanishes", GaussianRational.of(0),
              morera_defect(affine, square))
    # Riemann-sum oracle for a mixed-term polynomial
    mixed = ComplexPolynomial.make([(1, 1, GaussianRational.of(1, 1)),
                                    (0, 2, GaussianRational.of(Fraction(1, 2))),
                                    (2, 1, GaussianRational.of(-1))])
    exact = complex(morera_defect(mixed, square))
    steps = 4000
    approx = 0j
    for a, b in zip(square, square[1:]):
        za, zb = complex(a), complex(b)
        dz = (zb - za) / steps
        for k in range(steps):
            approx += mixed(za + (k + 0.5) * dz) * dz
    run.check_true("mixed contour matches quadrature",
                   abs(exact - approx) <= 1e-8, f"|diff| = {abs(exact - approx)}")
    return run, {"unit_square_morera": str(morera_defect(wbar, square))}


# === distortion =========================================================

def suite_distortion(seed: int = 0, samples: int = 100_000,
                     exact_samples: int = 2000) -> tuple:
    run = _Run()
    alg = algebra_by_label("fr3")
    ramp = profile_from_pieces([(Fraction(-1), Fraction(1), (0, 1))])
    shear = MapExpr((Shear(ramp),))
    stats = distortion_sample(alg, shear, samples, seed=seed,
                              sampler="scale-sweep", keep_rows=False)
    run.cases += samples
    bound = stats.calibrated_bound
    if stats.max_ratio > bound:
        run.failures.append({"input": "shear sweep max ratio",
                             "expected": f"<= calibrated bound {bound}",
                             "got": str(stats.max_ratio)})
    run.check_true("max ratio within 1.5x of first block",
                   stats.max_ratio < 1.5 * stats.first_block_max,
                   f"{stats.max_ratio} vs block {stats.first_block_max}")
    run.check_true("min ratio within 1.5x of first block",
                   stats.min_ratio > stats.first_block_min / 1.5,
                   f"{stats.min_ratio} vs block {stats.first_block_min}")

    t = Fraction(3, 2)
    dil = MapExpr((GradedAuto(GradedAutoParams(t, t, Fraction(0))),))
    dstats = distortion_sample(alg, dil, exact_samples, seed=seed,
                               sampler="scale-sweep", keep_rows=False)
    run.cases += exact_samples
    if not (dstats.exact_similarity
            and dstats.min_ratio == dstats.max_ratio == float(t)):
        run.failures.append({"input": "pure dilation ratios",
                             "expected": f"exactly {float(t)}",
                             "got": f"[{dstats.min_ratio}, {dstats.max_ratio}]"})
    g = alg.element([Fraction(1, 2), Fraction(-2), Fraction(3), Fraction(1, 3)])
    trans = MapExpr((LeftTranslation(g),))
    tstats = distortion_sample(alg, trans, exact_samples, seed=seed,
                               sampler="scale-sweep", keep_rows=False)
    run.cases += exact_samples
    if not (tstats.exact_similarity
            and tstats.min_ratio == tstats.max_ratio == 1.0):
        run.failures.append({"input": "translation ratios",
                             "expected": "exactly 1.0",
                             "got": f"[{tstats.min_ratio}, {tstats.max_ratio}]"})
    data = {"samples": samples,
            "ratio_range": [stats.min_ratio, stats.max_ratio],
            "first_block_range": [stats.first_block_min, stats.first_block_max],
            "calibrated_bound": bound}
    return run, data, {"distortion_stats": stats}


# === geodesic ===========================================================

def suite_geodesic(seed: int = 0, segments: int = 64, starts: int = 4,
                   sample_pairs: int = 12) -> tuple:
    run = _Run()
    alg = algebra_by_label("fr2")
    o = alg.zero()
    res = carnot_distance_upper(alg, o, alg.e(3), segments=segments,
                                starts=starts, seed=seed)
    iso = 2.0 * math.sqrt(math.pi)
    run.check_true("d_c(o, e_3) upper bound near 2 sqrt(pi)",
                   iso - 1e-12 <= res.value < iso + 5e-3,
                   f"value {res.value} vs {iso}")
    run.check_true("bound approaches from above", res.value >= iso - 1e-12,
                   f"{res.value} < {iso}")
    straight = carnot_distance_upper(alg, o, alg.e(1), segments=16,
                                     starts=2, seed=seed)
    run.check_true("d_c(o, e_1) = 1 via the straight segment",
                   abs(straight.value - 1.0) <= 1e-6,
                   f"value {straight.value}")

    # biLipschitz comparison with the homogeneous metric, sampled small
    rng = random.Random(f"{seed}:geodesic:pairs")
    worst = 0.0
    ok = True
    detail = ""
    for i in range(sample_pairs):
        x = _rand_element(rng, alg)
        if homogeneous_norm(alg, x) == 0:
            continue
        x = unit_sphere_point(alg, x)
        d = homogeneous_distance(alg, o, x)
        try:
            up = carnot_distance_upper(alg, o, x, segments=32, starts=2,
                                       seed=seed)
        except Exception as exc:        # infeasibility must surface, not hide
            ok = False
            detail = f"pair #{i}: {exc}"
            break
        if d > 0:
            worst = max(worst, up.value / d)
    run.check_true("carnot upper / homogeneous ratio bounded over sample",
                   ok and worst < 25.0, detail or f"worst ratio {worst}")

    # calibration stability across dilation scales
    base = alg.element([Fraction(3, 8), Fraction(-5, 8), Fraction(1, 4)])
    ratios = []
    for t in (Fraction(1, 100), Fraction(1), Fraction(100)):
        p = alg.dilate(t, base)
        d = homogeneous_distance(alg, o, p)
        up = carnot_distance_upper(alg, o, p, segments=32, starts=2, seed=seed)
        ratios.append(up.value / d)
    spread = max(ratios) / min(ratios)
    run.check_true("upper/homogeneous ratio stable across scales 1e-2..1e2",
                   spread <= 1.05, f"ratios {ratios}")
    data = {"value": res.value, "target": iso,
            "start_lengths": [None if math.isinf(v) else v
                              for v in res.start_lengths],
            "chosen_start": res.chosen_start,
            "bilipschitz_worst": worst,
            "calibration_spread": spread}
    return run, data, {"geodesic_result": res}


# === registry ===========================================================

SUITES: Dict[str, Callable] = {
    "group-axioms": suite_group_axioms,
    "bch-coeffs": suite_bch_coeffs,
    "conjugation": suite_conjugation,
    "rank": suite_rank,
    "dilation": suite_dilation,
    "automorphisms": suite_automorphisms,
    "shear-roundtrip": suite_shear_roundtrip,
    "pansu": suite_pansu,
    "lift-criterion": suite_lift_criterion,
    "distortion": suite_distortion,
    "geodesic": suite_geodesic,
}


def suite_names() -> list:
    return list(SUITES)


def run_suite(name: str, seed: int = 0, timings: bool = False,
              invocation: str = "", **overrides) -> Report:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from "
                       f"{', '.join(SUITES)}")
    t0 = time.perf_counter()
    out = SUITES[name](seed=seed, **overrides)
    elapsed = time.perf_counter() - t0
    run, data = out[0], out[1]
    artifacts = out[2] if len(out) > 2 else {}
    if not invocation:
        invocation = f"carnot-filiform verify {name} --seed {seed}"
    return Report(suite=name, cases=run.cases, failures=run.failures,
                  elapsed=elapsed if timings else 0.0, seed=seed,
                  invocation=invocation, data=data, artifacts=artifacts)
