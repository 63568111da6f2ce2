"""Tests for QUBO storage, energies, couplings, and incremental flip deltas."""

from __future__ import annotations

import numpy as np
import pytest

from moqubo.qubo import (
    CouplingMatrix,
    DeltaState,
    QuboMatrix,
    build_couplings,
    energy,
    flip_deltas,
    random_bits,
)


def test_qubo_matrix_rejects_non_square():
    with pytest.raises(ValueError, match="square"):
        QuboMatrix(np.zeros((2, 3)))


def test_qubo_matrix_rejects_lower_triangle():
    q = np.array([[1, 2], [3, 4]])
    with pytest.raises(ValueError, match="below the diagonal"):
        QuboMatrix(q)


def test_qubo_matrix_rejects_empty():
    with pytest.raises(ValueError, match="at least one variable"):
        QuboMatrix(np.zeros((0, 0)))


def test_qubo_matrix_is_immutable():
    q = QuboMatrix(np.array([[1, 2], [0, 3]]))
    with pytest.raises(ValueError):
        q.coeffs[0, 0] = 5


def test_from_dense_folds_lower_into_upper():
    dense = np.array([
        [1, 2, 0],
        [4, 5, 6],
        [7, 0, 9],
    ])
    q = QuboMatrix.from_dense(dense, constant=3)
    expected = np.array([
        [1, 6, 7],
        [0, 5, 6],
        [0, 0, 9],
    ])
    assert np.array_equal(q.coeffs, expected)
    assert q.constant == 3


def test_energy_matches_quadratic_form():
    q = QuboMatrix(np.array([
        [2, -1, 3],
        [0, 4, 0],
        [0, 0, -5],
    ]), constant=7)
    # x = (1, 1, 0): 2 + 4 - 1 + 7
    assert energy(q, np.array([1, 1, 0])) == 12
    # x = (1, 0, 1): 2 - 5 + 3 + 7
    assert energy(q, np.array([1, 0, 1])) == 7
    assert energy(q, np.zeros(3, dtype=int)) == 7


def test_energy_rejects_wrong_length():
    q = QuboMatrix(np.array([[1]]))
    with pytest.raises(ValueError, match="shape"):
        energy(q, np.array([1, 0]))


def test_scaled_add_combines_coefficients_and_constants():
    a = QuboMatrix(np.array([[1, 2], [0, 3]]), constant=4)
    b = QuboMatrix(np.array([[5, 0], [0, 1]]), constant=2)
    c = a.scaled_add(3, b)
    assert np.array_equal(c.coeffs, np.array([[16, 2], [0, 6]]))
    assert c.constant == 10


def test_scaled_add_rejects_size_mismatch():
    a = QuboMatrix(np.array([[1]]))
    b = QuboMatrix(np.array([[1, 0], [0, 1]]))
    with pytest.raises(ValueError, match="size mismatch"):
        a.scaled_add(1, b)


def test_build_couplings_symmetrises_and_keeps_diagonal():
    q = QuboMatrix(np.array([
        [2, -1, 3],
        [0, 4, 0],
        [0, 0, -5],
    ]))
    p = build_couplings(q)
    expected = np.array([
        [2, -1, 3],
        [-1, 4, 0],
        [3, 0, -5],
    ])
    assert np.array_equal(p.p, expected)
    assert isinstance(p, CouplingMatrix)
    assert p.size == 3


def test_flip_deltas_hand_example():
    q = QuboMatrix(np.array([
        [2, -1, 3],
        [0, 4, 0],
        [0, 0, -5],
    ]))
    p = build_couplings(q)
    x = np.array([1, 0, 1])
    # flipping bit 0 off: lose 2 (linear) and 3 (coupling with bit 2)
    # flipping bit 1 on: gain 4 (linear) - 1 (bit 0) + 0 (bit 2)
    # flipping bit 2 off: lose -5 and 3
    assert np.array_equal(flip_deltas(p, x), np.array([-5, 3, 2]))


def test_flip_deltas_match_full_reevaluation():
    rng = np.random.default_rng(42)
    for _ in range(200):
        m = int(rng.integers(2, 17))
        dense = rng.integers(-9, 10, size=(m, m))
        q = QuboMatrix.from_dense(dense, constant=int(rng.integers(-5, 6)))
        p = build_couplings(q)
        x = random_bits(m, rng)
        deltas = flip_deltas(p, x)
        for i in range(m):
            y = x.copy()
            y[i] ^= 1
            assert deltas[i] == energy(q, y) - energy(q, x)


def test_delta_state_tracks_flips_exactly():
    rng = np.random.default_rng(7)
    for _ in range(50):
        m = int(rng.integers(2, 13))
        qs = [QuboMatrix.from_dense(rng.integers(-8, 9, size=(m, m)))
              for _ in range(2)]
        ps = [build_couplings(q) for q in qs]
        state = DeltaState(qs, ps, random_bits(m, rng))
        for _ in range(30):
            i = int(rng.integers(m))
            state.flip(i)
            for k, q in enumerate(qs):
                assert state.energies[k] == energy(q, state.x)
                assert np.array_equal(state.deltas[k], flip_deltas(ps[k], state.x))


def test_delta_state_invariant_energy_plus_delta():
    rng = np.random.default_rng(3)
    m = 10
    qs = [QuboMatrix.from_dense(rng.integers(-6, 7, size=(m, m)))]
    state = DeltaState(qs, [build_couplings(qs[0])], random_bits(m, rng))
    for i in range(m):
        y = state.x.copy()
        y[i] ^= 1
        assert state.energies[0] + state.deltas[0][i] == energy(qs[0], y)


def test_delta_state_reset_recomputes():
    rng = np.random.default_rng(11)
    m = 8
    q = QuboMatrix.from_dense(rng.integers(-5, 6, size=(m, m)))
    p = build_couplings(q)
    state = DeltaState([q], [p], np.zeros(m, dtype=int))
    x = random_bits(m, rng)
    state.reset(x)
    assert np.array_equal(state.x, x)
    assert state.energies[0] == energy(q, x)
    assert np.array_equal(state.deltas[0], flip_deltas(p, x))


def test_delta_state_rejects_mismatched_objectives():
    q1 = QuboMatrix(np.array([[1]]))
    q2 = QuboMatrix(np.array([[1, 0], [0, 1]]))
    with pytest.raises(ValueError, match="disagree"):
        DeltaState([q1, q2], [build_couplings(q1), build_couplings(q2)], np.array([0]))
    with pytest.raises(ValueError, match="one coupling matrix per objective"):
        DeltaState([q1], [], np.array([0]))


def test_random_bits_deterministic_and_binary():
    a = random_bits(100, np.random.default_rng(5))
    b = random_bits(100, np.random.default_rng(5))
    assert np.array_equal(a, b)
    assert set(np.unique(a)) <= {0, 1}
