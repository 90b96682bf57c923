"""Matplotlib figures for crystals and tensor decompositions (Agg backend)."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .kashiwara import FiniteCrystal  # noqa: E402

_EDGE_COLORS = ["tab:red", "tab:blue", "tab:green", "tab:orange", "tab:purple", "tab:brown"]
# PNG metadata without a version string keeps files byte-stable across runs.
_SAVE = {"dpi": 120, "metadata": {"Software": None}}


def weight_projection(weights: np.ndarray) -> np.ndarray:
    """Planar coordinates for GL_n weights.

    GL_2 uses ``(w1 - w2, 0)``; higher rank sends ``e_k`` to the unit vector at
    angle ``pi/2 + 2 pi k / n``, which kills the trace direction.
    """
    w = np.atleast_2d(np.asarray(weights, dtype=float))
    n = w.shape[1]
    if n == 2:
        return np.column_stack([w[:, 0] - w[:, 1], np.zeros(len(w))])
    angles = np.pi / 2 + 2 * np.pi * np.arange(n) / n
    basis = np.column_stack([np.cos(angles), np.sin(angles)])
    return w @ basis


def plot_crystal(crystal: FiniteCrystal, path: str | Path, title: str | None = None) -> Path:
    """Crystal graph drawn at projected weights; edge ``b -> e_i b`` colored by ``i``."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 5))
    if len(crystal):
        xy = weight_projection(crystal.weights)
        counts = Counter(map(tuple, crystal.weights.tolist()))
        # Spread elements that share a weight on a small circle.
        seen: Counter = Counter()
        pos = np.empty_like(xy)
        for b, wt in enumerate(map(tuple, crystal.weights.tolist())):
            k, total = seen[wt], counts[wt]
            seen[wt] += 1
            if total > 1:
                a = 2 * np.pi * k / total
                pos[b] = xy[b] + 0.12 * np.array([np.cos(a), np.sin(a)])
            else:
                pos[b] = xy[b]
        for i in sorted(crystal.support):
            color = _EDGE_COLORS[(i - 1) % len(_EDGE_COLORS)]
            src = np.flatnonzero(crystal.up[:, i - 1] >= 0)
            for s in src:
                t = crystal.up[s, i - 1]
                ax.annotate("", xy=pos[t], xytext=pos[s],
                            arrowprops={"arrowstyle": "->", "color": color, "lw": 0.8})
            ax.plot([], [], color=color, label=f"e_{i}")
        ax.scatter(pos[:, 0], pos[:, 1], s=18, color="black", zorder=3)
        ax.legend(loc="best", fontsize=8)
    ax.set_aspect("equal", adjustable="box")
    ax.set_title(title or f"GL_{crystal.n} crystal, {len(crystal)} elements")
    ax.set_xticks([])
    ax.set_yticks([])
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)
    return path


def plot_multiplicities(rows, path: str | Path, title: str = "") -> Path:
    """Bar chart of ``(nu, multiplicity, q-polynomial)`` rows."""
    path = Path(path)
    labels = [",".join(str(v) for v in nu) for nu, _, _ in rows]
    mults = [m for _, m, _ in rows]
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(rows) + 2), 3.5))
    ax.bar(range(len(rows)), mults, color="tab:blue")
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("multiplicity")
    for k, (_, m, poly) in enumerate(rows):
        if poly:
            text = " ".join(f"q^{e}" if c == 1 else f"{c}q^{e}" for e, c in poly.items())
            ax.text(k, m, text, ha="center", va="bottom", fontsize=7)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)
    return path


def plot_depth_profile(depths: np.ndarray, path: str | Path, title: str = "") -> Path:
    """Number of elements per weight depth (Schubert crystals)."""
    path = Path(path)
    counts = Counter(int(d) for d in depths)
    xs = sorted(counts)
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    ax.bar(xs, [counts[x] for x in xs], color="tab:green")
    ax.set_xlabel("depth")
    ax.set_ylabel("elements")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    plt.close(fig)
    return path
