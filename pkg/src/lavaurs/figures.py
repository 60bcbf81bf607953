"""Matplotlib report figures written alongside the delimited outputs."""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def area_trend_figure(report, path):
    """Cover area (and interior proxy) against resolution, log-log."""
    res = [r["resolution"] for r in report.rows]
    cover = [r["cover_area"] for r in report.rows]
    interior = [r["interior_proxy_area"] for r in report.rows]
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.loglog(res, cover, "o-", label="undecided cover area")
    ax.loglog(res, interior, "s--", label="interior proxy area")
    ax.set_xlabel("resolution (pixels per side)")
    ax.set_ylabel("area")
    ax.set_title(f"shrinking cover, depth {report.lavaurs_depth}")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def raster_figure(raster, path):
    """Annotated view of a classification raster (axes in the plane)."""
    x0, y0, x1, y1 = raster.config.region
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.imshow(raster.to_image(), extent=(x0, x1, y0, y1), origin="upper",
              interpolation="nearest")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(f"enriched escape classification, depth "
                 f"{raster.config.lavaurs_depth}, sigma = {raster.sigma:.6g}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def partition_figure(report, path):
    """Per-level commensurability statistics of the dynamical partitions."""
    levels = [r[0] for r in report.rows]
    ratios = [r[2] for r in report.rows]
    lmin = [r[3] for r in report.rows]
    lmax = [r[4] for r in report.rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.8))
    ax1.plot(levels, ratios, "o-")
    ax1.axhline(report.K, color="k", ls=":", label=f"K = {report.K:.3f}")
    ax1.set_xlabel("level n")
    ax1.set_ylabel("max adjacent ratio")
    ax1.legend()
    ax1.grid(alpha=0.3)
    ax2.semilogy(levels, lmin, "v-", label="min |I|")
    ax2.semilogy(levels, lmax, "^-", label="max |I|")
    ax2.set_xlabel("level n")
    ax2.set_ylabel("interval length")
    ax2.legend()
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def ball_figure(balls, path):
    """Pulled-back balls in the lower strip, colored by level."""
    fig, ax = plt.subplots(figsize=(8, 3.2))
    levels = sorted({b.level for b in balls})
    cmap = plt.get_cmap("viridis")
    for b in balls:
        color = cmap((b.level - levels[0]) / max(1, levels[-1] - levels[0]))
        ax.add_patch(plt.Circle((b.center.real % 1.0, b.center.imag),
                                b.radius, color=color, alpha=0.6, lw=0))
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlim(0, 1)
    depths = [b.center.imag - b.radius for b in balls]
    ax.set_ylim(min(depths) * 1.3, 0.01)
    ax.set_xlabel("x mod 1")
    ax.set_ylabel("Im")
    ax.set_title("partition balls below the circle")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
