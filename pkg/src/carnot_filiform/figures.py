"""Static figure rendering for reports; files only, no interactive backend.

Every renderer takes the artifact produced by the matching suite or
subcommand, writes PNG files with fixed names into the requested directory,
and returns the written paths.  Rendering is strictly optional plumbing: the
numbers in the reports never depend on anything here.
"""

from __future__ import annotations

import math
import os
from typing import List

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .distortion import HIST_BINS, HIST_HI, HIST_LO, DistortionStats
from .forms import LiftResult
from .metric import CarnotUpperResult
from .pansu import PansuEstimate

__all__ = [
    "render_distortion",
    "render_geodesic",
    "render_pansu",
    "render_lift",
    "render_report",
]


def _save(fig, outdir: str, name: str) -> str:
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, name)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def render_distortion(stats: DistortionStats, outdir: str,
                      stem: str = "distortion") -> List[str]:
    out = []
    edges = [HIST_LO + (HIST_HI - HIST_LO) * k / HIST_BINS
             for k in range(HIST_BINS + 1)]
    centers = [(a + b) / 2 for a, b in zip(edges, edges[1:])]
    fig, ax = plt.subplots(figsize=(6, 3.6))
    ax.bar(centers, stats.histogram, width=(HIST_HI - HIST_LO) / HIST_BINS,
           color="#33658a")
    ax.set_xlabel("log10 distortion ratio")
    ax.set_ylabel("samples")
    ax.set_title(f"{stats.count} pairs, sampler {stats.sampler}")
    lo, hi = stats.min_ratio, stats.max_ratio
    span = max(abs(math.log10(lo)), abs(math.log10(hi))) if lo > 0 else 1.0
    ax.set_xlim(-1.2 * span - 0.05, 1.2 * span + 0.05)
    out.append(_save(fig, outdir, f"{stem}-histogram.png"))
    if stats.rows:
        fig, ax = plt.subplots(figsize=(6, 3.6))
        scales = [r[0] for r in stats.rows]
        ratios = [r[3] for r in stats.rows]
        ax.scatter(scales, ratios, s=3, alpha=0.35, color="#86bbd8",
                   edgecolors="none")
        ax.set_xscale("log")
        ax.set_xlabel("pair scale")
        ax.set_ylabel("d(F(p),F(q)) / d(p,q)")
        ax.axhline(stats.calibrated_bound, color="#f26419", lw=1,
                   label="calibrated bound")
        ax.legend(loc="upper right", fontsize=8)
        out.append(_save(fig, outdir, f"{stem}-scatter.png"))
    return out


def render_geodesic(result: CarnotUpperResult, outdir: str,
                    stem: str = "geodesic") -> List[str]:
    pts = result.path.points()
    alg = result.path.algebra
    lo1, hi1 = alg.layers[0]
    xs = [float(p.coords[lo1]) for p in pts]
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.8))
    if hi1 - lo1 >= 2:
        ys = [float(p.coords[lo1 + 1]) for p in pts]
        axes[0].plot(xs, ys, "-", color="#33658a", lw=1.2)
        axes[0].plot(xs[0], ys[0], "o", color="#f26419", ms=5)
        axes[0].set_xlabel("x_1")
        axes[0].set_ylabel("x_2")
        axes[0].set_aspect("equal", adjustable="datalim")
    else:
        axes[0].plot(range(len(xs)), xs, "-", color="#33658a")
        axes[0].set_xlabel("vertex")
        axes[0].set_ylabel("x_1")
    axes[0].set_title("first-layer trace")
    top = [float(p.coords[-1]) for p in pts]
    axes[1].plot(range(len(top)), top, "-", color="#758e4f")
    axes[1].set_xlabel("segment")
    axes[1].set_ylabel("last coordinate")
    axes[1].set_title(f"length {result.value:.6f}")
    return [_save(fig, outdir, f"{stem}-path.png")]


def render_pansu(est: PansuEstimate, outdir: str,
                 stem: str = "pansu") -> List[str]:
    if not est.residuals:
        return []
    fig, ax = plt.subplots(figsize=(6, 3.8))
    ts = [float(s) for s in est.scales]
    for direction, rs in zip(est.directions, est.residuals):
        label = "(" + ",".join(f"{float(c):g}" for c in direction.coords) + ")"
        floor = [max(r, 1e-17) for r in rs]
        ax.plot(ts, floor, "o-", ms=3, lw=1, label=label)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.invert_xaxis()
    ax.set_xlabel("scale t")
    ax.set_ylabel("residual")
    ax.legend(fontsize=6, ncol=2)
    ax.set_title(f"dilation quotients at {est.base_point.coords}")
    return [_save(fig, outdir, f"{stem}-residuals.png")]


def render_lift(lift: LiftResult, outdir: str, stem: str = "lift") -> List[str]:
    alg = lift.polyline.algebra
    verts = lift.polyline.vertices
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.8))
    xs = [float(v[0]) for v in verts]
    if alg.v1_dim >= 2:
        ys = [float(v[1]) for v in verts]
        axes[0].plot(xs, ys, "o-", color="#33658a", ms=3, lw=1.2)
        axes[0].set_xlabel("x_1")
        axes[0].set_ylabel("x_2")
        axes[0].set_aspect("equal", adjustable="datalim")
    else:
        axes[0].plot(range(len(xs)), xs, "o-", color="#33658a", ms=3)
        axes[0].set_xlabel("vertex")
    axes[0].set_title("first-layer polygon")
    for i in range(len(lift.centers[0])):
        axes[1].plot(range(len(lift.centers)),
                     [float(z[i]) for z in lift.centers],
                     "o-", ms=3, lw=1, label=f"center {i + 1}")
    axes[1].set_xlabel("vertex")
    axes[1].set_ylabel("second-layer component")
    axes[1].legend(fontsize=7)
    axes[1].set_title("horizontal lift")
    return [_save(fig, outdir, f"{stem}-lift.png")]


def render_report(report, outdir: str) -> List[str]:
    """Render whatever figure payloads a verification report carries."""
    out: List[str] = []
    art = getattr(report, "artifacts", {}) or {}
    if "distortion_stats" in art:
        out += render_distortion(art["distortion_stats"], outdir,
                                 stem=f"{report.suite}")
    if "geodesic_result" in art:
        out += render_geodesic(art["geodesic_result"], outdir,
                               stem=f"{report.suite}")
    if "pansu_estimate" in art:
        out += render_pansu(art["pansu_estimate"], outdir,
                            stem=f"{report.suite}")
    if "lift_result" in art:
        out += render_lift(art["lift_result"], outdir, stem=f"{report.suite}")
    return out
