"""PNG charts for the report commands. Uses the Agg canvas directly, so no display is needed."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Mapping, Optional, Sequence, Union

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

PathLike = Union[str, Path]


def _save(fig: Figure, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=110, bbox_inches="tight")
    return path


def plot_best_so_far(curves: Mapping[str, Mapping[str, Sequence[float]]], path: PathLike) -> Path:
    """One panel per judge, one line per policy; ``curves[judge][policy]`` is the mean curve."""
    judges = list(curves)
    fig = Figure(figsize=(4.2 * max(1, len(judges)), 3.4))
    for i, judge in enumerate(judges, 1):
        ax = fig.add_subplot(1, len(judges), i)
        for policy, ys in curves[judge].items():
            ax.plot(range(len(ys)), ys, marker="o" if len(ys) <= 2 else None, label=policy)
        ax.set_title(judge)
        ax.set_xlabel("round")
        ax.set_ylabel("mean best-so-far score")
        ax.grid(alpha=0.3)
    fig.axes[0].legend(fontsize=8)
    return _save(fig, path)


def plot_heatmap(values: np.ndarray, rows: Sequence[str], cols: Sequence[str], path: PathLike,
                 title: str = "", cmap: str = "coolwarm", annotate: bool = True,
                 mask: Optional[np.ndarray] = None) -> Path:
    """Heat map with NaN cells left blank; ``mask`` marks cells to star."""
    values = np.asarray(values, dtype=float)
    fig = Figure(figsize=(max(4.0, 0.6 * len(cols) + 2), max(2.5, 0.5 * len(rows) + 1.5)))
    ax = fig.add_subplot(1, 1, 1)
    finite = values[np.isfinite(values)]
    lim = float(np.max(np.abs(finite))) if finite.size else 1.0
    im = ax.imshow(np.ma.masked_invalid(values), cmap=cmap, vmin=-lim if cmap == "coolwarm" else 0,
                   vmax=lim if cmap == "coolwarm" else max(lim, 1.0), aspect="auto")
    ax.set_xticks(range(len(cols)))
    ax.set_xticklabels(cols, rotation=60, ha="right", fontsize=8)
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels(rows, fontsize=8)
    if annotate:
        for i in range(values.shape[0]):
            for j in range(values.shape[1]):
                if np.isfinite(values[i, j]):
                    star = "*" if mask is not None and mask[i, j] else ""
                    ax.text(j, i, f"{values[i, j]:.2g}{star}", ha="center", va="center", fontsize=7)
    fig.colorbar(im, ax=ax)
    ax.set_title(title)
    return _save(fig, path)


def plot_defense_bars(reports: Mapping[str, Mapping[str, Optional[float]]], path: PathLike) -> Path:
    """Grouped bars per judge: base/attacked x before/after.

    ``reports[judge]`` maps ``"base/before"``-style keys to means.
    """
    keys = ["base/before", "attacked/before", "base/after", "attacked/after"]
    judges = list(reports)
    fig = Figure(figsize=(max(4.0, 1.8 * len(judges) + 1), 3.4))
    ax = fig.add_subplot(1, 1, 1)
    width = 0.8 / len(keys)
    x = np.arange(len(judges))
    for k, key in enumerate(keys):
        ys = [reports[j].get(key) for j in judges]
        ax.bar(x + k * width, [np.nan if y is None else y for y in ys], width, label=key)
    ax.set_xticks(x + width * (len(keys) - 1) / 2)
    ax.set_xticklabels(judges)
    ax.set_ylabel("mean score")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_regret(curves: Dict[str, np.ndarray], sds: Dict[str, np.ndarray], path: PathLike) -> Path:
    fig = Figure(figsize=(5.0, 3.6))
    ax = fig.add_subplot(1, 1, 1)
    for label, mean in curves.items():
        t = np.arange(1, len(mean) + 1)
        ax.plot(t, mean, label=label)
        ax.fill_between(t, mean - sds[label], mean + sds[label], alpha=0.2)
    ax.set_xlabel("round")
    ax.set_ylabel("cumulative pseudo-regret")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    return _save(fig, path)
