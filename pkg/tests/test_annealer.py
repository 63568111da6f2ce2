"""Tests for the single-objective annealer and its schedule."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from moqubo.annealer import (
    AnnealParams,
    acceptance_probability,
    default_anneal_params,
    run_da,
)
from moqubo.qubo import QuboMatrix, build_couplings, energy


def small_params(**overrides):
    base = dict(i_max=200, delta0=1e6, delta_f=10.0, xi=0.001, beta=100.0, seed=0)
    base.update(overrides)
    return AnnealParams(**base)


def test_anneal_params_validation():
    with pytest.raises(ValueError, match="iteration budget"):
        small_params(i_max=0)
    with pytest.raises(ValueError, match="delta0 >= delta_f > 0"):
        small_params(delta_f=0.0)
    with pytest.raises(ValueError, match="delta0 >= delta_f > 0"):
        small_params(delta0=1.0, delta_f=2.0)
    with pytest.raises(ValueError, match="decay rate"):
        small_params(xi=0.0)
    with pytest.raises(ValueError, match="decay rate"):
        small_params(xi=1.0)
    with pytest.raises(ValueError, match="offset increment"):
        small_params(beta=-1.0)


def test_default_params_for_36_variables():
    p = default_anneal_params(36, seed=4)
    assert p.i_max == 324
    assert p.delta0 == 1e9
    assert p.delta_f == 1e4
    assert p.xi == 0.001
    assert p.beta == 1e9 / 324
    assert p.seed == 4
    with pytest.raises(ValueError, match="positive"):
        default_anneal_params(0)


def test_acceptance_probability_values():
    # offset-adjusted improvements are certain
    assert acceptance_probability(-5.0, 0.0, 100.0) == 1.0
    assert acceptance_probability(3.0, 3.0, 100.0) == 1.0
    assert acceptance_probability(5.0, 9.0, 100.0) == 1.0
    # worsenings decay exponentially
    assert acceptance_probability(50.0, 0.0, 100.0) == pytest.approx(math.exp(-0.5))
    assert acceptance_probability(50.0, 20.0, 100.0) == pytest.approx(math.exp(-0.3))
    with pytest.raises(ValueError, match="temperature"):
        acceptance_probability(1.0, 0.0, 0.0)


def test_run_da_is_deterministic():
    rng = np.random.default_rng(31)
    q = QuboMatrix.from_dense(rng.integers(-20, 21, size=(12, 12)))
    a = run_da(q, small_params(seed=5))
    b = run_da(q, small_params(seed=5))
    assert a.best_energy == b.best_energy
    assert np.array_equal(a.best_x, b.best_x)


def test_run_da_reports_exact_energy():
    rng = np.random.default_rng(13)
    for seed in range(5):
        q = QuboMatrix.from_dense(rng.integers(-15, 16, size=(10, 10)),
                                  constant=int(rng.integers(-4, 5)))
        res = run_da(q, small_params(seed=seed))
        assert res.best_energy == energy(q, res.best_x)


def test_run_da_finds_small_optimum():
    rng = np.random.default_rng(2)
    q = QuboMatrix.from_dense(rng.integers(-10, 11, size=(8, 8)))
    optimum = min(energy(q, np.array(bits))
                  for bits in itertools.product((0, 1), repeat=8))
    res = run_da(q, small_params(i_max=500))
    assert res.best_energy == optimum


def test_run_da_accepts_prebuilt_couplings():
    rng = np.random.default_rng(8)
    q = QuboMatrix.from_dense(rng.integers(-9, 10, size=(9, 9)))
    a = run_da(q, small_params(seed=3))
    b = run_da(q, small_params(seed=3), couplings=build_couplings(q))
    assert a.best_energy == b.best_energy
    assert np.array_equal(a.best_x, b.best_x)


def test_run_da_trace_shape_and_cooling():
    rng = np.random.default_rng(21)
    q = QuboMatrix.from_dense(rng.integers(-9, 10, size=(8, 8)))
    params = small_params(i_max=150, delta0=1e6, delta_f=50.0, xi=0.01)
    res = run_da(q, params, record_trace=True)
    t = res.trace
    assert t is not None
    assert t.coupling_builds == 1
    assert len(t.temperatures) == len(t.best_energies) == len(t.offsets) == 150
    # the schedule decays to the floor and never dips below it by more than
    # one multiplicative step
    assert np.all(t.temperatures <= params.delta_f)
    assert np.all(t.temperatures > params.delta_f * (1 - params.xi) ** 2)
    # the incumbent only improves
    assert np.all(np.diff(t.best_energies) <= 0)
    # the offset is zero right after any accepted iteration
    accepted = np.flatnonzero(t.accepted)
    assert np.all(t.offsets[accepted] == 0.0)
    # and grows by beta for every consecutive rejection
    rejected = np.flatnonzero(~t.accepted)
    for it in rejected:
        before = t.offsets[it - 1] if it > 0 else 0.0
        assert t.offsets[it] == before + params.beta


def test_run_da_trace_disabled_by_default():
    q = QuboMatrix(np.array([[1, 0], [0, 1]]))
    assert run_da(q, small_params(i_max=5)).trace is None
