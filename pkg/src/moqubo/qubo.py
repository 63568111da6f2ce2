"""QUBO matrices, energies, and incremental single-flip evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "QuboMatrix",
    "CouplingMatrix",
    "DeltaState",
    "energy",
    "build_couplings",
    "flip_deltas",
    "random_bits",
]


@dataclass(frozen=True)
class QuboMatrix:
    """Upper-triangular QUBO model: minimise ``x^T Q x + constant`` over binary x.

    Coefficients are stored canonically with entry ``(i, j)`` populated only
    for ``i <= j``; the diagonal carries the linear terms (``x_i^2 == x_i``
    for binary variables). Integer coefficients are the supported path so
    that energies and flip deltas stay exact; float matrices are accepted
    but not used by the solvers in this package.

    Parameters
    ----------
    coeffs:
        Square upper-triangular coefficient matrix.
    constant:
        Additive constant applied to every energy evaluation.
    """

    coeffs: np.ndarray
    constant: int = 0

    def __post_init__(self) -> None:
        q = np.array(self.coeffs, copy=True)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError(f"coefficient matrix must be square, got shape {q.shape}")
        if q.shape[0] < 1:
            raise ValueError("a QUBO needs at least one variable")
        if np.any(np.tril(q, -1)):
            raise ValueError("coefficients below the diagonal must be zero (store i <= j only)")
        q.setflags(write=False)
        object.__setattr__(self, "coeffs", q)

    @property
    def size(self) -> int:
        """Number of binary variables."""
        return self.coeffs.shape[0]

    @classmethod
    def from_dense(cls, dense: np.ndarray, constant: int = 0) -> "QuboMatrix":
        """Canonicalise a square matrix by folding ``Q[j, i]`` into ``Q[i, j]`` for i < j."""
        d = np.asarray(dense)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError(f"dense matrix must be square, got shape {d.shape}")
        upper = np.triu(d) + np.triu(d.T, 1)
        return cls(upper, constant)

    def scaled_add(self, weight: int, other: "QuboMatrix") -> "QuboMatrix":
        """Return ``self + weight * other`` (coefficients and constants alike)."""
        if other.size != self.size:
            raise ValueError(f"size mismatch: {self.size} vs {other.size}")
        return QuboMatrix(self.coeffs + weight * other.coeffs,
                          self.constant + weight * other.constant)


@dataclass(frozen=True)
class CouplingMatrix:
    """Dense symmetric coupling view of a QUBO.

    Off-diagonal entry ``(i, j)`` is the total coupling between variables i
    and j (the sum of the two triangular coefficients); the diagonal keeps
    the linear terms only. This is the layout the flip-delta evaluation
    reads row-wise.
    """

    p: np.ndarray

    @property
    def size(self) -> int:
        return self.p.shape[0]


def energy(q: QuboMatrix, x: np.ndarray) -> int | float:
    """Evaluate ``sum_{i <= j} Q[i, j] x_i x_j + constant`` for a bit vector."""
    x = np.asarray(x)
    if x.shape != (q.size,):
        raise ValueError(f"solution has shape {x.shape}, expected ({q.size},)")
    return (x @ q.coeffs @ x + q.constant).item()


def build_couplings(q: QuboMatrix) -> CouplingMatrix:
    """Symmetrise a QUBO into its coupling view ``P = Q + Q^T`` with ``P_ii = Q_ii``."""
    p = q.coeffs + q.coeffs.T
    np.fill_diagonal(p, q.coeffs.diagonal())
    p.setflags(write=False)
    return CouplingMatrix(p)


def flip_deltas(p: CouplingMatrix, x: np.ndarray) -> np.ndarray:
    """Energy change of every single-bit flip of ``x``.

    Entry i is ``(1 - 2 x_i) * (P_ii + sum_{j != i} P_ij x_j)``: the linear
    term always moves with the flipped bit, while couplings only count
    against the currently active partners.
    """
    x = np.asarray(x)
    if x.shape != (p.size,):
        raise ValueError(f"solution has shape {x.shape}, expected ({p.size},)")
    diag = p.p.diagonal()
    return (1 - 2 * x) * (diag * (1 - x) + p.p @ x)


def random_bits(m: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random bit vector of length m."""
    return rng.integers(0, 2, size=m, dtype=np.int64)


class DeltaState:
    """A mutable solution with incrementally maintained flip deltas.

    Tracks one bit vector together with, for each objective, its energy and
    the vector of all single-flip energy changes. Applying a flip updates
    every objective in O(m) instead of re-evaluating the quadratic form.

    Invariant: for every objective k and variable i, ``energies[k] +
    deltas[k][i]`` equals the full energy of ``x`` with bit i flipped.
    """

    def __init__(self, qubos: Sequence[QuboMatrix], couplings: Sequence[CouplingMatrix],
                 x: np.ndarray) -> None:
        if len(qubos) != len(couplings):
            raise ValueError("need one coupling matrix per objective")
        sizes = {q.size for q in qubos} | {p.size for p in couplings}
        if len(sizes) != 1:
            raise ValueError(f"objectives disagree on variable count: {sorted(sizes)}")
        self.qubos = tuple(qubos)
        self.couplings = tuple(couplings)
        self.reset(x)

    @property
    def size(self) -> int:
        return self.qubos[0].size

    def reset(self, x: np.ndarray) -> None:
        """Adopt a new solution and recompute energies and deltas from scratch."""
        x = np.array(x, dtype=np.int64)
        if x.shape != (self.size,):
            raise ValueError(f"solution has shape {x.shape}, expected ({self.size},)")
        self.x = x
        self.energies = [int(energy(q, x)) for q in self.qubos]
        self.deltas = [flip_deltas(p, x) for p in self.couplings]

    def flip(self, i: int) -> None:
        """Toggle bit i, updating all energies and delta vectors in place."""
        sign = int(1 - 2 * self.x[i])  # +1 when turning the bit on
        self.x[i] ^= 1
        signs = 1 - 2 * self.x
        for k, p in enumerate(self.couplings):
            d = self.deltas[k]
            old = int(d[i])
            self.energies[k] += old
            d += signs * (p.p[i] * sign)
            d[i] = -old
