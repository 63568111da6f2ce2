"""Shared fixtures: a 3-facility demo instance with hand-checked expectations."""

from __future__ import annotations

import numpy as np
import pytest

from moqubo.qap import QapInstance

DEMO_FLOW = np.array([
    [0, 1, 2],
    [1, 0, 1],
    [2, 1, 0],
])

DEMO_DISTANCE = np.array([
    [0, 3, 4],
    [3, 0, 6],
    [4, 6, 0],
])

# Upper-triangular cost coefficients of the demo instance over the 9 one-hot
# variables (bit i * 3 + u means facility i sits at location u), checked by
# hand against flow[i, j] * distance[u, v] summed over both orderings.
DEMO_COST_COEFFS = np.array([
    [0, 0, 0, 0, 6, 8, 0, 12, 16],
    [0, 0, 0, 6, 0, 12, 12, 0, 24],
    [0, 0, 0, 8, 12, 0, 16, 24, 0],
    [0, 0, 0, 0, 0, 0, 0, 6, 8],
    [0, 0, 0, 0, 0, 0, 6, 0, 12],
    [0, 0, 0, 0, 0, 0, 8, 12, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
])

# Assignment-constraint coefficients for n = 3: -2 on the diagonal, +2 for
# pairs sharing a facility or a location, constant 2n = 6.
DEMO_CONSTRAINT_COEFFS = np.array([
    [-2, 2, 2, 2, 0, 0, 2, 0, 0],
    [0, -2, 2, 0, 2, 0, 0, 2, 0],
    [0, 0, -2, 0, 0, 2, 0, 0, 2],
    [0, 0, 0, -2, 2, 2, 2, 0, 0],
    [0, 0, 0, 0, -2, 2, 0, 2, 0],
    [0, 0, 0, 0, 0, -2, 0, 0, 2],
    [0, 0, 0, 0, 0, 0, -2, 2, 2],
    [0, 0, 0, 0, 0, 0, 0, -2, 2],
    [0, 0, 0, 0, 0, 0, 0, 0, -2],
])

# sigma = (2, 0, 1): cost 38, constraint energy 0
DEMO_FEASIBLE_X = np.array([0, 0, 1, 1, 0, 0, 0, 1, 0])
# facilities 1 and 2 both at location 1: cost 36, constraint energy 2
DEMO_INFEASIBLE_X = np.array([0, 0, 1, 0, 1, 0, 0, 1, 0])


@pytest.fixture
def demo_instance() -> QapInstance:
    return QapInstance(3, DEMO_DISTANCE, (DEMO_FLOW,), name="demo3")
