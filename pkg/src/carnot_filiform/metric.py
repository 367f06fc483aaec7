"""Homogeneous metric structure and a certified upper bound on the Carnot distance.

The homogeneous norm is the layer sum ||x|| = sum_i |x_i|^(1/i) with the
Euclidean norm on each layer, so on the real filiform algebra it reads
(x_1^2+x_2^2)^(1/2) + sum |x_i|^(1/(i-1)).  Distances are computed from the
exact group difference (-p) * q; float enters only in the final norm, which
is what makes left invariance and dilation similarity hold at the element
level instead of up to roundoff.

The Carnot (length) distance is approached from above with horizontal
piecewise-constant-control paths: a penalty method over the controls with
increasing weight, followed by an exact closure step that patches the last
controls in rational arithmetic so the reported path really ends at the
target (step-2 algebras) or a Newton polish plus exact defect check
(higher step).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .algebra import AlgebraError, Element, GradedAlgebra
from .bch import group_product, product_coords
from .scalars import is_exact


class InfeasiblePathError(RuntimeError):
    """The optimizer could not produce a path ending within tolerance."""

    def __init__(self, message: str, best_defect: float):
        super().__init__(message)
        self.best_defect = best_defect


# === homogeneous norm and distance =====================================

def exactify(X: Element) -> Element:
    """Promote float coordinates to exact rationals (floats are binary rationals)."""
    if X.is_exact:
        return X
    return Element(X.algebra, tuple(c if is_exact(c) else Fraction(c)
                                    for c in X.coords))


def layer_square_sums(alg: GradedAlgebra, coords: Sequence) -> list:
    """Per-layer sums of squared coordinates; exact when the input is exact."""
    out = []
    for lo, hi in alg.layers:
        s = 0
        for c in coords[lo:hi]:
            s += c * c
        out.append(s)
    return out


def homogeneous_norm(alg: GradedAlgebra, X: Element) -> float:
    alg.check_same(X.algebra)
    total = 0.0
    for depth, s in enumerate(layer_square_sums(alg, X.coords), start=1):
        if s:
            total += float(s) ** (0.5 / depth)
    return total


def group_difference(alg: GradedAlgebra, p: Element, q: Element) -> Element:
    """(-p) * q, computed exactly (float inputs are promoted first)."""
    return group_product(alg, -exactify(p), exactify(q))


def homogeneous_distance(alg: GradedAlgebra, p: Element, q: Element) -> float:
    return homogeneous_norm(alg, group_difference(alg, p, q))


def measure_quasi_triangle_constant(alg: GradedAlgebra, samples: int = 200,
                                    seed: int = 0) -> float:
    """Largest observed d(p,r) / (d(p,q) + d(q,r)) over random triples.

    The homogeneous distance only satisfies a quasi-triangle inequality; the
    constant is measured, not asserted.
    """
    rng = random.Random(seed)

    def rand_elem():
        return alg.element([Fraction(rng.randint(-8, 8), rng.randint(1, 4))
                            for _ in range(alg.dim)])

    worst = 0.0
    for _ in range(samples):
        p, q, r = rand_elem(), rand_elem(), rand_elem()
        denom = homogeneous_distance(alg, p, q) + homogeneous_distance(alg, q, r)
        if denom == 0:
            continue
        worst = max(worst, homogeneous_distance(alg, p, r) / denom)
    return worst


# === horizontal paths ==================================================

@dataclass(frozen=True)
class HorizontalPath:
    """Piecewise-constant-control horizontal path on [0, 1].

    ``controls[k]`` holds first-layer coordinates of the control on segment k;
    the group point after segment k is the product of the segment exponentials
    exp(u_1 dt) * ... * exp(u_k dt).  Controls are exact rationals so the
    endpoint evaluation is exact; float appears only in lengths.
    """

    algebra: GradedAlgebra
    controls: tuple
    duration: Fraction = Fraction(1)

    def __post_init__(self):
        v1 = self.algebra.v1_dim
        for u in self.controls:
            if len(u) != v1:
                raise AlgebraError(f"controls must have {v1} first-layer coordinates")
            if not all(is_exact(c) for c in u):
                raise AlgebraError("path controls must be exact rationals")
        if not is_exact(self.duration) or self.duration <= 0:
            raise AlgebraError("duration must be a positive rational")

    @property
    def segments(self) -> int:
        return len(self.controls)

    def _segment_exponentials(self):
        alg = self.algebra
        dt = Fraction(self.duration, self.segments)
        lo, hi = alg.layers[0]
        for u in self.controls:
            coords = [Fraction(0)] * alg.dim
            for i, c in enumerate(u):
                coords[lo + i] = dt * Fraction(c)
            yield alg.element(coords)

    def endpoint(self, base: Optional[Element] = None) -> Element:
        point = exactify(base) if base is not None else self.algebra.zero()
        for seg in self._segment_exponentials():
            point = group_product(self.algebra, point, seg)
        return point

    def points(self, base: Optional[Element] = None) -> list:
        """Exact group points at segment boundaries, base first."""
        point = exactify(base) if base is not None else self.algebra.zero()
        out = [point]
        for seg in self._segment_exponentials():
            point = group_product(self.algebra, point, seg)
            out.append(point)
        return out

    def length(self) -> float:
        dt = float(self.duration) / self.segments
        return sum(math.sqrt(sum(float(c) ** 2 for c in u)) for u in self.controls) * dt


# === Carnot distance upper bound =======================================

@dataclass(frozen=True)
class CarnotUpperResult:
    value: float
    path: HorizontalPath
    defect: float
    start_lengths: tuple
    chosen_start: int


def _v2_forms(alg: GradedAlgebra):
    """Antisymmetric matrices of the second-layer bracket components."""
    lo1, hi1 = alg.layers[0]
    lo2, hi2 = alg.layers[1]
    v1 = hi1 - lo1
    forms = []
    for a in range(lo2, hi2):
        m = np.zeros((v1, v1))
        for (i, j), row in alg.table.items():
            if lo1 <= i < hi1 and lo1 <= j < hi1:
                c = row.get(a)
                if c:
                    m[i - lo1, j - lo1] = float(c)
                    m[j - lo1, i - lo1] = -float(c)
        forms.append(m)
    return forms


def _objective_step2(alg: GradedAlgebra, target: np.ndarray, nseg: int):
    forms = _v2_forms(alg)
    lo1, hi1 = alg.layers[0]
    lo2, hi2 = alg.layers[1]
    v1 = hi1 - lo1
    dt = 1.0 / nseg
    t1 = target[lo1:hi1]
    t2 = target[lo2:hi2]

    def parts(flat: np.ndarray):
        u = flat.reshape(nseg, v1)
        s = np.cumsum(u, axis=0)
        sm1 = np.vstack([np.zeros(v1), s[:-1]])
        e1 = dt * s[-1]
        e2 = np.array([0.5 * dt * dt * np.einsum("ki,ij,kj->", sm1, f, u)
                       for f in forms])
        return u, e1, e2

    def defect(e1, e2):
        d1 = t1 - e1
        d2 = np.array([t2[a] - e2[a] - 0.5 * float(e1 @ forms[a] @ t1)
                       for a in range(len(forms))])
        return d1, d2

    def f(flat: np.ndarray, mu: float) -> float:
        u, e1, e2 = parts(flat)
        d1, d2 = defect(e1, e2)
        energy = dt * float(np.sum(u * u))
        return energy + mu * (float(d1 @ d1) + float(d2 @ d2))

    return f, parts, defect


def _objective_generic(alg: GradedAlgebra, target: np.ndarray, nseg: int):
    lo1, hi1 = alg.layers[0]
    v1 = hi1 - lo1
    dt = 1.0 / nseg

    def endpoint(flat: np.ndarray):
        u = flat.reshape(nseg, v1)
        point = (0.0,) * alg.dim
        for k in range(nseg):
            seg = [0.0] * alg.dim
            for i in range(v1):
                seg[lo1 + i] = dt * u[k, i]
            point = product_coords(alg, point, tuple(seg))
        return u, point

    def f(flat: np.ndarray, mu: float) -> float:
        u, point = endpoint(flat)
        diff = product_coords(alg, tuple(-c for c in point), tuple(target))
        energy = dt * float(np.sum(u * u))
        return energy + mu * sum(float(c) ** 2 for c in diff)

    return f, endpoint


def _rationalize_controls(u: np.ndarray, denom_bits: int = 48) -> list:
    limit = 1 << denom_bits
    return [[Fraction(float(c)).limit_denominator(limit) for c in row] for row in u]


def _close_step2_exact(alg: GradedAlgebra, controls: list, target: Element) -> Optional[list]:
    """Patch controls in rational arithmetic so the endpoint is exactly ``target``.

    First-layer closure shifts every control by the same vector; the
    second-layer defect is then removed by perturbing adjacent control pairs
    (u_a - w, u_{a+1} + w), which changes layer two linearly by
    (dt^2/2) omega(u_a + u_{a+1}, w) and nothing else.
    """
    lo1, hi1 = alg.layers[0]
    lo2, hi2 = alg.layers[1]
    v1 = hi1 - lo1
    nseg = len(controls)
    dt = Fraction(1, nseg)
    tc = target.coords
    # close layer one: sum(dt * u_k) must equal the target first layer, and
    # dt * nseg = 1, so shifting every control by the defect does it
    total = [sum(u[i] for u in controls) for i in range(v1)]
    shift = [Fraction(tc[lo1 + i]) - dt * total[i] for i in range(v1)]
    controls = [[u[i] + shift[i] for i in range(v1)] for u in controls]

    # exact second-layer defect of the shifted path
    omega_rows = []  # per V2 coord: sparse (i, j, c) with i<j local to V1
    for a in range(lo2, hi2):
        row = []
        for (i, j), tab in alg.table.items():
            if lo1 <= i < hi1 and lo1 <= j < hi1 and tab.get(a):
                row.append((i - lo1, j - lo1, Fraction(tab[a])))
        omega_rows.append(row)

    def omega_val(row, x, y):
        return sum(c * (x[i] * y[j] - x[j] * y[i]) for i, j, c in row)

    s = [Fraction(0)] * v1
    e2 = [Fraction(0)] * len(omega_rows)
    half_dt2 = dt * dt / 2
    for u in controls:
        for a, row in enumerate(omega_rows):
            e2[a] += half_dt2 * omega_val(row, s, u)
        s = [si + ui for si, ui in zip(s, u)]
    need = [Fraction(tc[lo2 + a]) - e2[a] for a in range(len(omega_rows))]
    if all(v == 0 for v in need):
        return controls

    # one adjacent pair gives a linear system  (dt^2/2) omega_a(z, w) = need_a
    for a0 in range(nseg - 2, -1, -1):
        z = [controls[a0][i] + controls[a0 + 1][i] for i in range(v1)]
        rows = []
        for row in omega_rows:
            rows.append([half_dt2 * sum(c * ((z[i] if t == j else 0) - (z[j] if t == i else 0))
                                        for i, j, c in row) for t in range(v1)])
        w = _solve_particular(rows, need)
        if w is None:
            continue
        patched = [list(u) for u in controls]
        patched[a0] = [patched[a0][i] - w[i] for i in range(v1)]
        patched[a0 + 1] = [patched[a0 + 1][i] + w[i] for i in range(v1)]
        return patched
    return None


def _solve_particular(rows: list, rhs: list) -> Optional[list]:
    """Particular rational solution of an underdetermined linear system, or None."""
    m = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    nrow = len(m)
    ncol = len(rows[0]) if nrow else 0
    piv_cols = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, nrow) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [v / pv for v in m[r]]
        for i in range(nrow):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
        if r == nrow:
            break
    for i in range(r, nrow):
        if m[i][ncol] != 0:
            return None
    sol = [Fraction(0)] * ncol
    for i, c in enumerate(piv_cols):
        sol[c] = m[i][ncol]
    return sol


def carnot_distance_upper(alg: GradedAlgebra, p: Element, q: Element, *,
                          segments: int = 64, starts: int = 4, seed: int = 0,
                          penalty_rounds: Sequence[float] = (1e2, 1e4, 1e6, 1e8),
                          maxiter: int = 160, tol: float = 1e-8) -> CarnotUpperResult:
    """Length of an explicit horizontal path from p to q; an upper bound on d_c.

    Penalty method over piecewise-constant controls with increasing weight,
    independent multi-starts (deterministic per-start seeds, result is the
    shortest feasible start, ties to the lower start index).  Raises
    :class:`InfeasiblePathError` when no start ends within tolerance.
    """
    target = group_difference(alg, p, q)
    tf = np.array([float(c) for c in target.coords])
    lo1, hi1 = alg.layers[0]
    v1 = hi1 - lo1
    step2 = alg.step == 2

    if step2:
        f = _objective_step2(alg, tf, segments)[0]
    else:
        f = _objective_generic(alg, tf, segments)[0]

    best = None
    start_lengths = []
    best_defect = math.inf
    for s_idx in range(starts):
        rng = np.random.default_rng(seed * 1000 + s_idx)
        straight = np.tile(tf[lo1:hi1], (segments, 1))
        if s_idx == 0:
            init = straight
        else:
            scale = max(1.0, float(np.linalg.norm(tf[lo1:hi1])))
            init = straight + rng.normal(scale=scale + 1.0, size=(segments, v1))
        flat = init.reshape(-1)
        for mu in penalty_rounds:
            res = minimize(f, flat, args=(mu,), method="L-BFGS-B",
                           options={"maxiter": maxiter})
            flat = res.x
        u = flat.reshape(segments, v1)

        controls = _rationalize_controls(u)
        closed = _close_step2_exact(alg, controls, target) if step2 else controls
        if closed is None:
            start_lengths.append(math.inf)
            continue
        path = HorizontalPath(alg, tuple(tuple(row) for row in closed))
        end = path.endpoint()
        defect = homogeneous_distance(alg, end, target)
        if defect < best_defect:
            best_defect = defect
        if defect > tol:
            start_lengths.append(math.inf)
            continue
        length = path.length()
        start_lengths.append(length)
        if best is None or length < best[0]:
            best = (length, path, defect, s_idx)

    if best is None:
        raise InfeasiblePathError(
            f"no start reached the target within {tol:g} "
            f"(best endpoint defect {best_defect:.3g})", best_defect)
    length, path, defect, s_idx = best
    return CarnotUpperResult(length, path, defect, tuple(start_lengths), s_idx)


def carnot_calibration(alg: GradedAlgebra, samples: int = 8, seed: int = 0,
                       **opt) -> float:
    """Measured constant C with homogeneous d <= C * carnot upper bound.

    Sampled on (near) unit-sphere directions; used by property checks, not
    asserted as a theorem.
    """
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(samples):
        coords = [Fraction(rng.randint(-8, 8), 8) for _ in range(alg.dim)]
        x = alg.element(coords)
        nrm = homogeneous_norm(alg, x)
        if nrm == 0:
            continue
        x = unit_sphere_point(alg, x)
        d = homogeneous_distance(alg, alg.zero(), x)
        res = carnot_distance_upper(alg, alg.zero(), x, **opt)
        if res.value > 0:
            worst = max(worst, d / res.value)
    return worst


def unit_sphere_point(alg: GradedAlgebra, X: Element) -> Element:
    """Dilate X onto (approximately) the unit homogeneous sphere, exactly rational."""
    nrm = homogeneous_norm(alg, X)
    if nrm == 0:
        raise AlgebraError("cannot normalize the zero element")
    t = Fraction(1.0 / nrm).limit_denominator(1 << 20)
    return alg.dilate(t, exactify(X))
