"""Figures for neighborhoods and order relations, written straight to files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .core import Element, Pair  # noqa: E402
from .filters import Verdict  # noqa: E402
from .topologies import NbhdParams, WeakTopology, compare_topologies, member_coords  # noqa: E402

_VERDICT_CODES = {
    Verdict.LESS: 0,
    Verdict.EQUAL: 1,
    Verdict.GREATER: 2,
    Verdict.INCOMPARABLE: 3,
    Verdict.UNKNOWN: 4,
}
_VERDICT_COLORS = ["#4c72b0", "#55a868", "#c44e52", "#cccccc", "#8172b2"]


def neighborhood_grid(t: WeakTopology, p: NbhdParams, size: int) -> np.ndarray:
    grid = np.zeros((size, size), dtype=bool)
    for a in range(size):
        for b in range(size):
            grid[a, b] = member_coords(t, p, a, b)
    return grid


def plot_neighborhood(t: WeakTopology, p: NbhdParams, path: str, size: int = 40,
                      mark: Element | None = None):
    """Heatmap of the basic neighborhood; rows are the first coordinate."""
    grid = neighborhood_grid(t, p, size)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(grid, cmap=ListedColormap(["white", "#4c72b0"]), origin="upper", interpolation="nearest")
    ax.set_xlabel("b")
    ax.set_ylabel("a")
    ax.set_title(f"N(n={p.n}, m={p.m}, li={p.li}, ri={p.ri})", fontsize=9)
    ax.axhline(p.n + 0.5, color="#c44e52", lw=0.8)
    ax.axvline(p.m + 0.5, color="#c44e52", lw=0.8)
    if isinstance(mark, Pair) and mark.a < size and mark.b < size:
        ax.plot(mark.b, mark.a, "x", color="black")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def order_matrix(tops: list[WeakTopology], bound: int = 40) -> np.ndarray:
    codes = np.zeros((len(tops), len(tops)), dtype=int)
    for i, s in enumerate(tops):
        for j, t in enumerate(tops):
            codes[i, j] = _VERDICT_CODES[compare_topologies(s, t, bound).verdict]
    return codes


def plot_order_matrix(tops: list[WeakTopology], labels: list[str], path: str, bound: int = 40):
    codes = order_matrix(tops, bound)
    fig, ax = plt.subplots(figsize=(6, 5))
    im = ax.imshow(codes, cmap=ListedColormap(_VERDICT_COLORS), vmin=-0.5, vmax=4.5, interpolation="nearest")
    if len(labels) <= 24:
        ax.set_xticks(range(len(labels)), labels, rotation=90, fontsize=7)
        ax.set_yticks(range(len(labels)), labels, fontsize=7)
    cbar = fig.colorbar(im, ticks=range(5))
    cbar.ax.set_yticklabels([v.value for v in _VERDICT_CODES])
    ax.set_title("row compared with column", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
