"""Tests for shared normalisation bounds and the two-objective hypervolume."""

from __future__ import annotations

import numpy as np
import pytest

from moqubo.metrics import (
    DEFAULT_REFERENCE,
    NormalisationBounds,
    bounds_from_sets,
    hypervolume_2d,
    normalize_points,
)


def test_default_reference():
    assert DEFAULT_REFERENCE == (2.1, 2.1)


def test_bounds_validation():
    with pytest.raises(ValueError, match="matching vectors"):
        NormalisationBounds(np.array([1.0]), np.array([2.0, 3.0]))
    with pytest.raises(ValueError, match="exceed"):
        NormalisationBounds(np.array([1.0, 5.0]), np.array([2.0, 5.0]))


def test_bounds_from_sets_spans_all_points():
    sets = [
        [(10, 200), (30, 100)],
        [],
        [(20, 150), (5, 300)],
    ]
    b = bounds_from_sets(sets)
    assert np.array_equal(b.lower, [5, 100])
    assert np.array_equal(b.upper, [30, 300])


def test_bounds_from_sets_includes_known_front():
    b = bounds_from_sets([[(10, 10)], [(20, 20)]], known_front=[(1, 50)])
    assert np.array_equal(b.lower, [1, 10])
    assert np.array_equal(b.upper, [20, 50])


def test_bounds_from_sets_rejects_empty_union():
    with pytest.raises(ValueError, match="empty"):
        bounds_from_sets([[], []])


def test_normalize_points_maps_onto_unit_window():
    b = NormalisationBounds(np.array([10.0, 100.0]), np.array([30.0, 300.0]))
    pts = normalize_points([(10, 100), (30, 300), (20, 200)], b)
    assert np.array_equal(pts, [[1.0, 1.0], [2.0, 2.0], [1.5, 1.5]])
    assert normalize_points([], b).shape == (0, 2)
    with pytest.raises(ValueError, match="shape"):
        normalize_points([(1, 2, 3)], b)


def test_hypervolume_single_point():
    assert hypervolume_2d([(1.0, 1.0)]) == (2.1 - 1.0) * (2.1 - 1.0)
    assert hypervolume_2d([(1.0, 1.0)]) == pytest.approx(1.21)


def test_hypervolume_two_point_front():
    assert hypervolume_2d([(1.0, 2.0), (2.0, 1.0)]) == pytest.approx(0.21)
    # order must not matter
    assert hypervolume_2d([(2.0, 1.0), (1.0, 2.0)]) == pytest.approx(0.21)


def test_hypervolume_ignores_dominated_points():
    assert hypervolume_2d([(1.0, 1.0), (1.5, 1.5)]) == pytest.approx(1.21)
    assert hypervolume_2d([(1.0, 1.0), (1.0, 1.0)]) == pytest.approx(1.21)


def test_hypervolume_points_outside_reference():
    assert hypervolume_2d([(3.0, 3.0)]) == 0.0
    assert hypervolume_2d([(1.0, 1.0), (5.0, 0.5)]) == pytest.approx(1.21)
    assert hypervolume_2d([]) == 0.0


def test_hypervolume_custom_reference():
    assert hypervolume_2d([(0.0, 0.0)], reference=(2.0, 3.0)) == pytest.approx(6.0)
    with pytest.raises(ValueError, match="two components"):
        hypervolume_2d([(1.0, 1.0)], reference=(1.0, 1.0, 1.0))
    with pytest.raises(ValueError, match="shape"):
        hypervolume_2d([(1.0, 1.0, 1.0)])


def test_hypervolume_against_monte_carlo():
    rng = np.random.default_rng(123)
    ref = np.asarray(DEFAULT_REFERENCE)
    for _ in range(10):
        pts = rng.uniform(1.0, 2.0, size=(int(rng.integers(1, 10)), 2))
        samples = rng.uniform([1.0, 1.0], ref, size=(400_000, 2))
        covered = (samples[:, None, :] >= pts[None, :, :]).all(-1).any(-1)
        area = float(np.prod(ref - 1.0))
        assert hypervolume_2d(pts) == pytest.approx(covered.mean() * area, abs=3e-3)
