"""Figure rendering for comparison reports: front scatters and hypervolume boxes."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

__all__ = ["render_front_scatter", "render_hypervolume_box"]


def render_front_scatter(fronts: Mapping[str, Sequence[Sequence[float]]], out_path: Path | str,
                         reference: Sequence[Sequence[float]] | None = None) -> Path:
    """Scatter each labelled front in objective space and save the figure.

    The optional reference front is drawn as a connected line underneath the
    scatters so algorithm output can be judged against it.
    """
    out_path = Path(out_path)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    if reference is not None and len(reference):
        ref = sorted((float(p[0]), float(p[1])) for p in reference)
        ax.plot([p[0] for p in ref], [p[1] for p in ref],
                color="0.55", marker=".", linewidth=1.0, label="reference front", zorder=1)
    markers = ["o", "s", "^", "D", "v", "P", "X"]
    for idx, (label, points) in enumerate(fronts.items()):
        if not len(points):
            continue
        xs = [float(p[0]) for p in points]
        ys = [float(p[1]) for p in points]
        ax.scatter(xs, ys, s=28, marker=markers[idx % len(markers)], label=label, zorder=2)
    ax.set_xlabel("objective 1")
    ax.set_ylabel("objective 2")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def render_hypervolume_box(values: Mapping[str, Sequence[float]], out_path: Path | str) -> Path:
    """Box plot of per-run hypervolumes, one box per labelled result set."""
    out_path = Path(out_path)
    labels = list(values)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.boxplot([list(values[label]) for label in labels], tick_labels=labels)
    ax.set_ylabel("hypervolume")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
