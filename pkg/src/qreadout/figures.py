"""Figure rendering for scan and receiver outputs.

Renders the same rows that go into the delimited output, so a PNG can be
produced alongside any CSV without recomputation.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_heatmap(rows: list[dict], x_name: str, y_name: str, value: str,
                   path: str, title: str | None = None) -> None:
    """Heatmap of one scan column over a rectangular grid of rows."""
    xs = sorted({row[x_name] for row in rows})
    ys = sorted({row[y_name] for row in rows})
    grid = np.full((len(ys), len(xs)), np.nan)
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    for row in rows:
        grid[yi[row[y_name]], xi[row[x_name]]] = row[value]
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    mesh = ax.pcolormesh(xs, ys, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=value)
    ax.set_xlabel(x_name)
    ax.set_ylabel(y_name)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_bell_surface(rows: list[dict], path: str, title: str | None = None) -> None:
    """Gain surface over copy count (log axis) and significance level."""
    ms = sorted({row["M"] for row in rows})
    phis = sorted({row["phi"] for row in rows})
    grid = np.full((len(phis), len(ms)), np.nan)
    mi = {v: i for i, v in enumerate(ms)}
    pi = {v: i for i, v in enumerate(phis)}
    for row in rows:
        grid[pi[row["phi"]], mi[row["M"]]] = row["G"]
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    mesh = ax.pcolormesh(ms, phis, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="G")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("M (copies)")
    ax.set_ylabel("phi (significance level)")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
