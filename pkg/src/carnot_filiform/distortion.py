"""BiLipschitz distortion sampling for map words.

Draws pairs q = p * dilate(s, u) with u near the unit sphere of the
homogeneous norm and s spread across several orders of magnitude, then
reports statistics of the ratio d(F(p), F(q)) / d(p, q).  Sampling runs in
float arithmetic (the ratios are float diagnostics, not exact claims) in
per-shard seeded streams, so results are deterministic for a given seed and
independent of how shards would be scheduled.

When the word is recognizably an exact similarity (translations, complex
conjugation, graded atoms with b = 0 and a1 = a2 of rational modulus, zero
shears) the ratio column is the proven constant factor rather than a float
quotient; the identity d(F(p), F(q)) = factor * d(p, q) is exact
mathematics, so reporting anything noisier would be strictly worse.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .algebra import Element, GradedAlgebra
from .bch import product_coords
from .maps import (ComplexConjugation, GradedAuto, LeftTranslation, MapError,
                   Shear, apply_map, as_map)
from .scalars import GaussianRational, rational_sqrt

__all__ = [
    "DistortionStats",
    "similarity_factor",
    "distortion_sample",
]

SHARD_SIZE = 4096
HIST_LO, HIST_HI, HIST_BINS = -6.0, 6.0, 48


def similarity_factor(m) -> Optional[Fraction]:
    """Exact similarity factor of the word, or None when not recognized.

    Recognized atoms: translations and complex conjugation (factor 1), zero
    shears (factor 1), and graded atoms with b = 0 and a1 = a2 whose modulus
    is rational.  A None result only means the short circuit does not apply.
    """
    factor = Fraction(1)
    for atom in as_map(m).atoms:
        if isinstance(atom, (LeftTranslation, ComplexConjugation)):
            continue
        if isinstance(atom, Shear):
            if all(not p.coeffs for p in atom.profile.pieces):
                continue
            return None
        if isinstance(atom, GradedAuto):
            prm = atom.params
            bz = prm.b.is_zero() if isinstance(prm.b, GaussianRational) else prm.b == 0
            if not bz or prm.a1 != prm.a2:
                return None
            if isinstance(prm.a1, GaussianRational):
                root = rational_sqrt(prm.a1.re ** 2 + prm.a1.im ** 2)
                if root is None:
                    return None
                factor *= root
            else:
                factor *= abs(Fraction(prm.a1))
            continue
        raise MapError(f"unknown atom {atom!r}")
    return factor


def _norm_float(alg: GradedAlgebra, coords) -> float:
    total = 0.0
    for depth, (lo, hi) in enumerate(alg.layers, start=1):
        s = 0.0
        for c in coords[lo:hi]:
            fc = float(c)
            s += fc * fc
        if s:
            total += s ** (0.5 / depth)
    return total


def _dist_float(alg: GradedAlgebra, a, b) -> float:
    neg = [-float(c) for c in a]
    diff = product_coords(alg, neg, [float(c) for c in b])
    return _norm_float(alg, diff)


@dataclass(frozen=True)
class DistortionStats:
    sampler: str
    count: int
    seed: int
    min_ratio: float
    max_ratio: float
    first_block: int
    first_block_min: float
    first_block_max: float
    histogram: Tuple[int, ...]
    exact_similarity: Optional[Fraction]
    rows: Tuple[Tuple[float, float, float, float], ...]

    @property
    def calibrated_bound(self) -> float:
        """1.5x the largest ratio seen in the leading block."""
        return 1.5 * self.first_block_max


def _sphere_direction(alg: GradedAlgebra, rng: random.Random) -> list:
    while True:
        g = [rng.gauss(0.0, 1.0) for _ in range(alg.dim)]
        nrm = _norm_float(alg, g)
        if nrm > 1e-9:
            return [c * (1.0 / nrm) ** alg.weights[i] for i, c in enumerate(g)]


def distortion_sample(alg: GradedAlgebra, m, n: int, *, seed: int = 0,
                      sampler: str = "scale-sweep", box: float = 1.0,
                      scale_lo: float = 1e-3, scale_hi: float = 1e3,
                      first_block: int = 1000,
                      keep_rows: bool = True) -> DistortionStats:
    """Sample n distortion ratios of the word under the homogeneous metric.

    sampler "scale-sweep" stratifies the dilation scale over a geometric
    grid indexed by the sample number; "box" draws it log-uniformly.
    Degenerate draws with d(p, q) = 0 are redrawn.
    """
    if n < 2:
        raise ValueError("need at least two sample pairs")
    if sampler not in ("scale-sweep", "box"):
        raise ValueError(f"unknown sampler {sampler!r} (use scale-sweep or box)")
    word = as_map(m)
    factor = similarity_factor(word)
    ffac = None if factor is None else float(factor)
    log_lo, log_hi = math.log10(scale_lo), math.log10(scale_hi)

    rows = []
    histogram = [0] * HIST_BINS
    min_ratio = math.inf
    max_ratio = -math.inf
    fb_min = math.inf
    fb_max = -math.inf
    rng = None
    for k in range(n):
        if k % SHARD_SIZE == 0:
            rng = random.Random(seed * 1_000_003 + k // SHARD_SIZE)
        if sampler == "scale-sweep":
            s = 10.0 ** (log_lo + (log_hi - log_lo) * (k + 0.5) / n)
        else:
            s = 10.0 ** rng.uniform(log_lo, log_hi)
        for _ in range(100):
            p = [rng.uniform(-box, box) for _ in range(alg.dim)]
            u = _sphere_direction(alg, rng)
            su = [s ** alg.weights[i] * c for i, c in enumerate(u)]
            q = product_coords(alg, p, su)
            d_pq = _dist_float(alg, p, q)
            if d_pq > 0.0:
                break
        else:
            raise RuntimeError("could not draw a non-degenerate pair")
        if ffac is None:
            fp = apply_map(alg, word, Element(alg, tuple(p)))
            fq = apply_map(alg, word, Element(alg, tuple(q)))
            d_f = _dist_float(alg, fp.coords, fq.coords)
            ratio = d_f / d_pq
        else:
            ratio = ffac
            d_f = ffac * d_pq
        if keep_rows:
            rows.append((s, d_pq, d_f, ratio))
        min_ratio = min(min_ratio, ratio)
        max_ratio = max(max_ratio, ratio)
        if k < first_block:
            fb_min = min(fb_min, ratio)
            fb_max = max(fb_max, ratio)
        b = int((math.log10(ratio) - HIST_LO) / (HIST_HI - HIST_LO) * HIST_BINS) \
            if ratio > 0 else 0
        histogram[min(max(b, 0), HIST_BINS - 1)] += 1

    return DistortionStats(sampler=sampler, count=n, seed=seed,
                           min_ratio=min_ratio, max_ratio=max_ratio,
                           first_block=min(first_block, n),
                           first_block_min=fb_min, first_block_max=fb_max,
                           histogram=tuple(histogram),
                           exact_similarity=factor,
                           rows=tuple(rows))
