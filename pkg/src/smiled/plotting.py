"""Report figures.

Every report-writing CLI path can render a matplotlib figure next to its
CSV/JSON output.  Rendering is file-only (Agg backend); nothing here
opens a window.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_STYLE = {
    "figure.figsize": (6.4, 4.0),
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
}


def _new_axes():
    plt.rcParams.update(_STYLE)
    fig, ax = plt.subplots()
    return fig, ax


def _save(fig, path) -> None:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_loss_curve(rows: Sequence, path) -> None:
    """Per-objective training curves from pretrain log rows."""
    fig, ax = _new_axes()
    by_objective: dict[str, tuple[list, list]] = {}
    for row in rows:
        xs, ys = by_objective.setdefault(row.objective, ([], []))
        xs.append(row.step)
        ys.append(row.loss)
    for objective, (xs, ys) in sorted(by_objective.items()):
        ax.plot(xs, ys, label=objective, linewidth=0.8)
    ax.set_xlabel("step")
    ax.set_ylabel("loss")
    ax.set_yscale("log")
    ax.legend()
    _save(fig, path)


def plot_length_histogram(histogram: Mapping[int, int], path) -> None:
    """Token-length distribution from a curation report."""
    fig, ax = _new_axes()
    lengths = sorted(histogram)
    ax.bar(lengths, [histogram[k] for k in lengths], width=0.9)
    ax.set_xlabel("token length")
    ax.set_ylabel("molecules")
    _save(fig, path)


def plot_metric_bars(metrics: Mapping[str, float], path) -> None:
    """Bar chart for a metric report (generation metrics, probe scores)."""
    fig, ax = _new_axes()
    names = list(metrics)
    values = [metrics[name] for name in names]
    ax.bar(range(len(names)), values)
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=30, ha="right")
    ax.set_ylim(0, max(1.0, max(values) * 1.1 if values else 1.0))
    for i, v in enumerate(values):
        ax.annotate(f"{v:.3f}", (i, v), ha="center", va="bottom", fontsize=8)
    _save(fig, path)


def plot_probe_fit(actual, predicted, path, title: str = "") -> None:
    """Held-out probe fit: predicted vs actual embedding coordinates."""
    fig, ax = _new_axes()
    ax.plot(actual, predicted, ".", markersize=2, alpha=0.4)
    lo = min(float(min(actual, default=0)), float(min(predicted, default=0)))
    hi = max(float(max(actual, default=1)), float(max(predicted, default=1)))
    ax.plot([lo, hi], [lo, hi], "k--", linewidth=0.8)
    ax.set_xlabel("actual coordinate")
    ax.set_ylabel("predicted coordinate")
    if title:
        ax.set_title(title)
    _save(fig, path)
