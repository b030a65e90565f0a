"""Figure rendering for exported data (headless matplotlib backend)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .spectral import delta_section


def render_sections_figure(path, heights) -> str:
    """Section ellipses at a few heights plus semi-axes over all heights."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.5))
    theta = np.linspace(0, 2 * math.pi, 200)
    shown = [h for h in (-0.9, -0.5, 0.0, 0.5, 0.9) if -1 < h < 1]
    for r0 in shown:
        sec = delta_section(r0)
        a1, a2 = sec.semi_axes
        u = np.array(sec.axis_directions[0])
        v = np.array(sec.axis_directions[1])
        pts = (a1 * np.outer(np.cos(theta), u) + a2 * np.outer(np.sin(theta), v))
        ax1.plot(pts[:, 0], pts[:, 1], label=f"r = {r0:+.1f}")
    ax1.set_xlabel("p")
    ax1.set_ylabel("q")
    ax1.set_title("horizontal sections (axes on p = ±q)")
    ax1.set_aspect("equal")
    ax1.legend(fontsize=8)

    hs = np.asarray(sorted(heights))
    ax2.plot(hs, np.sqrt(1 + hs), label="semi-axis along p = q")
    ax2.plot(hs, np.sqrt(1 - hs), label="semi-axis along p = -q")
    ax2.plot(hs, np.sqrt(1 - hs ** 2), "--", label="area / pi")
    ax2.set_xlabel("section height r")
    ax2.set_title("section geometry")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def render_cloud_figure(path, p, q, r) -> str:
    """Coordinate cloud: the three planar projections."""
    fig, axes = plt.subplots(1, 3, figsize=(12, 4))
    for ax, (x, y, lx, ly) in zip(axes, [(p, q, "p", "q"),
                                         (p, r, "p", "r"),
                                         (q, r, "q", "r")]):
        ax.hexbin(x, y, gridsize=40, extent=(-1, 1, -1, 1), cmap="viridis")
        ax.set_xlabel(lx)
        ax.set_ylabel(ly)
        ax.set_aspect("equal")
    fig.suptitle("pushforward coordinates of Haar-random triples")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def render_radial_figure(path, phis, bins: int = 40) -> str:
    """Eigenphase histogram against the sin^2 density."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(phis, bins=bins, range=(0, math.pi), density=True,
            alpha=0.6, label="samples")
    grid = np.linspace(0, math.pi, 300)
    ax.plot(grid, (2 / math.pi) * np.sin(grid) ** 2, "k-",
            label="(2/pi) sin^2")
    ax.set_xlabel("eigenphase")
    ax.set_ylabel("density")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def render_genfun_figure(path, coeff_rows) -> str:
    """Bar chart of generating-function coefficients grouped by degree.

    ``coeff_rows`` is a list of (alpha, beta, gamma, value) tuples.
    """
    fig, ax = plt.subplots(figsize=(8, 4))
    rows = sorted(coeff_rows, key=lambda t: (t[0] + t[1] + t[2], t[:3]))
    labels = [f"{a}{b}{g}" for a, b, g, _ in rows]
    values = [v for _, _, _, v in rows]
    ax.bar(range(len(rows)), values)
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, rotation=90, fontsize=6)
    ax.set_yscale("symlog")
    ax.set_xlabel("(alpha beta gamma)")
    ax.set_ylabel("coefficient")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
