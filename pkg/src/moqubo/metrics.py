"""Front quality metrics: shared normalisation and two-dimensional hypervolume."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DEFAULT_REFERENCE",
    "NormalisationBounds",
    "MetricReport",
    "bounds_from_sets",
    "normalize_points",
    "hypervolume_2d",
]

log = logging.getLogger(__name__)

# reference point for fronts normalised into [1, 2] per objective
DEFAULT_REFERENCE = (2.1, 2.1)


@dataclass(frozen=True)
class NormalisationBounds:
    """Per-objective value ranges used to map energies into [1, 2]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower, dtype=np.float64)
        upper = np.asarray(self.upper, dtype=np.float64)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError(f"bounds must be matching vectors, got {lower.shape} and {upper.shape}")
        if np.any(upper <= lower):
            raise ValueError(f"each upper bound must exceed its lower bound: {lower} vs {upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)


def bounds_from_sets(sets: Iterable[Sequence[Sequence[float]]],
                     known_front: Sequence[Sequence[float]] | None = None) -> NormalisationBounds:
    """Componentwise min/max over the union of all point sets plus an optional known front.

    Comparisons across solvers must normalise against one shared range, so
    collect every front involved (and the true front when available) before
    computing hypervolumes.
    """
    pools = [np.asarray(points, dtype=np.float64)
             for points in sets if len(points)]
    if known_front is not None and len(known_front):
        pools.append(np.asarray(known_front, dtype=np.float64))
    if not pools:
        raise ValueError("cannot derive bounds from an empty union of point sets")
    stacked = np.vstack(pools)
    return NormalisationBounds(stacked.min(axis=0), stacked.max(axis=0))


def normalize_points(points: Sequence[Sequence[float]],
                     bounds: NormalisationBounds) -> np.ndarray:
    """Affine map of each objective onto [1, 2]; out-of-range points land outside it."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        return pts.reshape(0, bounds.lower.shape[0])
    if pts.ndim != 2 or pts.shape[1] != bounds.lower.shape[0]:
        raise ValueError(f"points have shape {pts.shape}, expected (*, {bounds.lower.shape[0]})")
    return 1.0 + (pts - bounds.lower) / (bounds.upper - bounds.lower)


def hypervolume_2d(points: Sequence[Sequence[float]],
                   reference: Sequence[float] = DEFAULT_REFERENCE) -> float:
    """Area dominated by a two-objective point set up to the reference corner.

    Points must beat the reference in both objectives to count; anything
    else contributes zero area and is flagged. The dominated subset is
    discarded and the survivors swept in ascending first objective, summing
    one rectangle per point.
    """
    ref = np.asarray(reference, dtype=np.float64)
    if ref.shape != (2,):
        raise ValueError(f"reference must have two components, got shape {ref.shape}")
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        log.warning("hypervolume of an empty front is 0")
        return 0.0
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"points have shape {pts.shape}, expected (*, 2)")
    inside = (pts < ref).all(axis=1)
    if not inside.all():
        log.warning("%d point(s) do not dominate the reference %s and contribute nothing",
                    int((~inside).sum()), tuple(ref))
    pts = pts[inside]
    if pts.size == 0:
        return 0.0
    le = (pts[:, None, :] <= pts[None, :, :]).all(axis=-1)
    lt = (pts[:, None, :] < pts[None, :, :]).any(axis=-1)
    dominated = (le & lt).any(axis=0)
    front = pts[~dominated]
    front = front[np.lexsort((front[:, 1], front[:, 0]))]
    edges = np.append(front[1:, 0], ref[0])
    return float(((edges - front[:, 0]) * (ref[1] - front[:, 1])).sum())


@dataclass
class MetricReport:
    """Summary of one run's front for tabulation."""

    hypervolume: float
    front_size: int
    feasible_fraction: float
    wall_time: float
