"""Matplotlib renderings of the tabular reports.

Two figures accompany the delimited output: an annotated block heatmap of
the pairwise H values (one 2x2 block per term pair, mirroring the CSV
layout) and a dumbbell chart comparing each evaluated relationship's point H
against its posterior lower bound. Rendering is file-based and deterministic;
graph drawing/layout is out of scope here (graphs export as DOT instead).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .stats import HQuadruple, Quadrant, format_h

_QUAD_POS = {
    Quadrant.EXCLUSION: (0, 0),
    Quadrant.FORWARD: (0, 1),
    Quadrant.BACKWARD: (1, 0),
    Quadrant.COMPLEMENT: (1, 1),
}


def h_matrix_figure(
    terms: tuple[str, ...],
    quads: dict[tuple[str, str], HQuadruple],
    path: str,
) -> None:
    """Block heatmap of all four H indices per pair, annotated to 2 decimals."""
    m = len(terms)
    size = 2 * (m - 1)
    grid = np.full((size, size), np.nan)
    for (a, b), quad in quads.items():
        i, j = terms.index(a), terms.index(b) - 1
        for q, (dr, dc) in _QUAD_POS.items():
            v = quad.by_quadrant(q)
            if v is not None:
                grid[2 * i + dr, 2 * j + dc] = v
    fig, ax = plt.subplots(figsize=(1.1 * size + 2.2, 1.1 * size + 1.2))
    masked = np.ma.masked_invalid(np.clip(grid, -1.0, 1.0))
    im = ax.imshow(masked, cmap="RdBu_r", vmin=-1.0, vmax=1.0)
    for r in range(size):
        for c in range(size):
            if not np.isnan(grid[r, c]):
                ax.text(c, r, format_h(grid[r, c]), ha="center", va="center", fontsize=8)
    ax.set_xticks([2 * j + 0.5 for j in range(m - 1)])
    ax.set_xticklabels(terms[1:], rotation=30, ha="right")
    ax.set_yticks([2 * i + 0.5 for i in range(m - 1)])
    ax.set_yticklabels(terms[:-1])
    ax.set_xticks(np.arange(-0.5, size, 2), minor=True)
    ax.set_yticks(np.arange(-0.5, size, 2), minor=True)
    ax.grid(which="minor", color="black", linewidth=0.8)
    ax.tick_params(which="minor", length=0)
    ax.set_title("Loevinger H per pair (excl | fwd / bwd | compl)")
    fig.colorbar(im, ax=ax, shrink=0.8, label="H")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


_ARROWS = {"forward": "→", "backward": "←", "exclusion": "∥"}


def bounds_figure(report: dict, path: str) -> None:
    """Dumbbell chart: point H vs lower credibility bound per evaluated cell.

    Vertical guides mark the admission floor and the two classification
    thresholds.
    """
    rows = []
    for entry in report["pairs"]:
        for quadrant, cell in entry["cells"].items():
            arrow = _ARROWS.get(quadrant, "?")
            label = f"{entry['a']} {arrow} {entry['b']}"
            rows.append((label, cell["point_h"], cell["eta_low"], cell["retained"]))
    fig, ax = plt.subplots(figsize=(7, 1 + 0.45 * max(1, len(rows))))
    for y, (label, point, eta, retained) in enumerate(rows):
        ax.plot([eta, point], [y, y], color="0.6", lw=1.5, zorder=1)
        ax.scatter([point], [y], color="tab:blue", zorder=2, label="point H" if y == 0 else None)
        ax.scatter(
            [eta], [y],
            color="tab:green" if retained else "tab:red",
            marker="s", zorder=2,
            label="lower bound" if y == 0 else None,
        )
    for x, style, name in (
        (report["h_floor"], ":", "floor"),
        (report["h_tend"], "--", "tendency"),
        (report["h_quasi"], "-.", "q-implication"),
    ):
        ax.axvline(x, color="0.3", linestyle=style, lw=1, label=name)
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels([r[0] for r in rows], fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("H")
    ax.set_title(f"Point H vs lower bound (guarantee {report['delta']:g})")
    ax.legend(loc="lower right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
