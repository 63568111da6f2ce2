"""Quadratic assignment instances and their QUBO encodings.

A bi-objective instance carries one distance matrix and one flow matrix per
objective. Assignments are encoded two-way one-hot: bit ``i * n + u`` is set
exactly when facility i sits at location u, so a feasible solution is a
permutation matrix flattened row-major.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qubo import QuboMatrix, build_couplings

__all__ = [
    "QapInstance",
    "PenaltyWeights",
    "qap_cost",
    "encode_permutation",
    "decode_solution",
    "build_cost_qubo",
    "build_constraint_qubo",
    "penalty_weight",
    "normalize_qubo",
    "parse_instance",
    "write_instance",
    "generate_instance",
    "InstanceParseError",
]

NORMALISATION_TARGET = 2**23


@dataclass(frozen=True)
class QapInstance:
    """A quadratic assignment instance with one flow matrix per objective.

    Parameters
    ----------
    n:
        Number of facilities (= number of locations).
    distances:
        ``n x n`` non-negative integer distance matrix.
    flows:
        One ``n x n`` non-negative integer flow matrix per objective.
    name:
        Free-form label carried through reports.
    correlation:
        Optional flow correlation the instance was generated with; metadata
        only, never consulted by solvers.
    """

    n: int
    distances: np.ndarray
    flows: tuple[np.ndarray, ...]
    name: str = ""
    correlation: float | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"instance size must be positive, got {self.n}")
        d = np.array(self.distances, copy=True)
        if d.shape != (self.n, self.n):
            raise ValueError(f"distance matrix has shape {d.shape}, expected ({self.n}, {self.n})")
        if np.any(d < 0):
            raise ValueError("distance entries must be non-negative")
        d.setflags(write=False)
        object.__setattr__(self, "distances", d)
        if len(self.flows) < 1:
            raise ValueError("need at least one flow matrix")
        frozen = []
        for k, h in enumerate(self.flows):
            h = np.array(h, copy=True)
            if h.shape != (self.n, self.n):
                raise ValueError(f"flow matrix {k} has shape {h.shape}, expected ({self.n}, {self.n})")
            if np.any(h < 0):
                raise ValueError(f"flow matrix {k} has negative entries")
            h.setflags(write=False)
            frozen.append(h)
        object.__setattr__(self, "flows", tuple(frozen))

    @property
    def num_objectives(self) -> int:
        return len(self.flows)

    @property
    def qubo_size(self) -> int:
        """Number of binary variables in the one-hot encoding (n^2)."""
        return self.n * self.n


@dataclass(frozen=True)
class PenaltyWeights:
    """Constraint penalty factors: one per objective, plus an optional aggregate."""

    alpha1: int | float
    alpha2: int | float | None = None
    alpha: int | float | None = None


def qap_cost(inst: QapInstance, sigma: np.ndarray, objective: int = 0) -> int:
    """Assignment cost ``sum_{i,j} flow[i, j] * distance[sigma_i, sigma_j]``."""
    sigma = np.asarray(sigma)
    if sigma.shape != (inst.n,) or sorted(sigma.tolist()) != list(range(inst.n)):
        raise ValueError(f"{sigma!r} is not a permutation of 0..{inst.n - 1}")
    h = inst.flows[objective]
    d = inst.distances[np.ix_(sigma, sigma)]
    return int((h * d).sum())


def encode_permutation(sigma: np.ndarray, n: int) -> np.ndarray:
    """One-hot bit vector of a permutation: bit ``i * n + sigma_i`` set for each i."""
    sigma = np.asarray(sigma)
    if sigma.shape != (n,) or sorted(sigma.tolist()) != list(range(n)):
        raise ValueError(f"{sigma!r} is not a permutation of 0..{n - 1}")
    x = np.zeros(n * n, dtype=np.int64)
    x[np.arange(n) * n + sigma] = 1
    return x


def decode_solution(x: np.ndarray, n: int) -> np.ndarray | None:
    """Recover the permutation from a bit vector, or ``None`` if infeasible."""
    x = np.asarray(x)
    if x.shape != (n * n,):
        raise ValueError(f"solution has shape {x.shape}, expected ({n * n},)")
    grid = x.reshape(n, n)
    if np.any(grid.sum(axis=1) != 1) or np.any(grid.sum(axis=0) != 1):
        return None
    return grid.argmax(axis=1)


def build_cost_qubo(inst: QapInstance, objective: int = 0) -> QuboMatrix:
    """Cost QUBO of one objective over the one-hot variables.

    The ordered pair (facility i at u, facility j at v) contributes
    ``flow[i, j] * distance[u, v]``, which is exactly the Kronecker product
    of the flow and distance matrices; folding it upper-triangular merges
    each unordered pair's two contributions.
    """
    dense = np.kron(inst.flows[objective], inst.distances)
    return QuboMatrix.from_dense(dense, constant=0)


def build_constraint_qubo(n: int) -> QuboMatrix:
    """Assignment-constraint QUBO: sum of squared row and column one-hot violations.

    Expanding ``sum_i (1 - sum_u x_iu)^2 + sum_u (1 - sum_i x_iu)^2`` gives
    -2 on the diagonal, +2 between variables sharing a facility or sharing a
    location, and a constant 2n. Its energy is 0 exactly on permutation
    matrices and at least 2 on anything else.
    """
    m = n * n
    g = np.zeros((m, m), dtype=np.int64)
    np.fill_diagonal(g, -2)
    for i in range(n):
        for u in range(n):
            a = i * n + u
            for v in range(u + 1, n):  # same facility, two locations
                g[a, i * n + v] = 2
            for j in range(i + 1, n):  # same location, two facilities
                g[a, j * n + u] = 2
    return QuboMatrix(g, constant=2 * n)


def penalty_weight(cost: QuboMatrix) -> int | float:
    """Constraint weight alpha for a cost QUBO.

    Bounds the largest single-flip cost change: over the symmetric coupling
    view with diagonal c and off-diagonal couplings C, take

        w = max_i max(-c_i - sum_{j != i} min(C_ij, 0),
                       c_i + sum_{j != i} max(C_ij, 0))

    and return ``alpha = w / 2`` (rounded up on the integer path), valid
    because the constraint energy of any infeasible solution one flip away
    from feasible is at least 2.
    """
    p = build_couplings(cost).p
    diag = p.diagonal().copy()
    off = p.copy()
    np.fill_diagonal(off, 0)
    neg = np.minimum(off, 0).sum(axis=1)
    pos = np.maximum(off, 0).sum(axis=1)
    w = max((-diag - neg).max(), (diag + pos).max())
    if np.issubdtype(p.dtype, np.integer):
        return -(-int(w) // 2)
    return float(w) / 2.0


def normalize_qubo(q: QuboMatrix, target: int = NORMALISATION_TARGET) -> QuboMatrix:
    """Rescale so the largest absolute coefficient equals ``target``, rounding to integers."""
    maxabs = np.abs(q.coeffs).max()
    if maxabs == 0:
        raise ValueError("cannot normalise an all-zero QUBO")
    scale = target / maxabs
    coeffs = np.rint(q.coeffs * scale).astype(np.int64)
    constant = int(np.rint(q.constant * scale))
    return QuboMatrix(coeffs, constant)


class InstanceParseError(ValueError):
    """Malformed instance text; carries the offending line number."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def _tokenize(text: str) -> tuple[list[tuple[str, int]], dict[str, str]]:
    """Whitespace tokens tagged with line numbers, plus ``# key: value`` metadata."""
    tokens: list[tuple[str, int]] = []
    meta: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body, _, comment = line.partition("#")
        key, _, value = comment.partition(":")
        if value and key.strip() in ("name", "correlation"):
            meta[key.strip()] = value.strip()
        tokens.extend((tok, lineno) for tok in body.split())
    return tokens, meta


class _TokenReader:
    def __init__(self, tokens: list[tuple[str, int]]) -> None:
        self.tokens = tokens
        self.pos = 0
        self.last_line = 1

    def next_int(self, what: str) -> int:
        if self.pos >= len(self.tokens):
            raise InstanceParseError(f"file ends before {what}", self.last_line)
        tok, line = self.tokens[self.pos]
        self.pos += 1
        self.last_line = line
        try:
            value = int(tok)
        except ValueError:
            raise InstanceParseError(f"expected an integer for {what}, got {tok!r}", line) from None
        return value

    def next_matrix(self, n: int, what: str) -> np.ndarray:
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                value = self.next_int(f"{what} entry ({i + 1}, {j + 1})")
                if value < 0:
                    raise InstanceParseError(
                        f"{what} entry ({i + 1}, {j + 1}) is negative: {value}", self.last_line)
                row.append(value)
            rows.append(row)
        return np.array(rows, dtype=np.int64)


def parse_instance(text: str, name: str = "") -> QapInstance:
    """Parse the canonical instance format.

    Layout: instance size n, objective count K, the n x n distance matrix,
    then K flow matrices, all whitespace-separated. ``#`` starts a comment;
    ``# name:`` and ``# correlation:`` comments are read back as metadata.
    """
    tokens, meta = _tokenize(text)
    reader = _TokenReader(tokens)
    n = reader.next_int("the instance size")
    if n < 1:
        raise InstanceParseError(f"instance size must be positive, got {n}", reader.last_line)
    k = reader.next_int("the objective count")
    if k < 1:
        raise InstanceParseError(f"objective count must be positive, got {k}", reader.last_line)
    distances = reader.next_matrix(n, "distance")
    flows = tuple(reader.next_matrix(n, f"flow {idx + 1}") for idx in range(k))
    if reader.pos != len(tokens):
        tok, line = tokens[reader.pos]
        raise InstanceParseError(f"unexpected trailing value {tok!r}", line)
    correlation = float(meta["correlation"]) if "correlation" in meta else None
    return QapInstance(n, distances, flows,
                       name=meta.get("name", name), correlation=correlation)


def write_instance(inst: QapInstance) -> str:
    """Serialise to the canonical format; ``parse_instance`` round-trips it."""
    lines = []
    if inst.name:
        lines.append(f"# name: {inst.name}")
    if inst.correlation is not None:
        lines.append(f"# correlation: {inst.correlation}")
    lines.append(str(inst.n))
    lines.append(str(inst.num_objectives))
    for matrix in (inst.distances, *inst.flows):
        lines.append("")
        lines.extend(" ".join(str(v) for v in row) for row in matrix.tolist())
    return "\n".join(lines) + "\n"


def generate_instance(n: int, k: int = 2, correlation: float = 0.0,
                      seed: int = 0, name: str = "") -> QapInstance:
    """Random instance whose two flow matrices correlate roughly as requested.

    Distances are symmetric with zero diagonal. Flows mix a shared Gaussian
    field with per-objective noise so that, for k = 2, the off-diagonal
    entries of the two flow matrices have Pearson correlation close to
    ``correlation`` (within about 0.15 for n >= 10). Deterministic per seed.
    """
    if n < 2:
        raise ValueError(f"instance size must be at least 2, got {n}")
    if k not in (1, 2):
        raise ValueError(f"objective count must be 1 or 2, got {k}")
    if not -1.0 <= correlation <= 1.0:
        raise ValueError(f"correlation must lie in [-1, 1], got {correlation}")
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.integers(1, 51, size=(n, n)), 1)
    distances = upper + upper.T
    shared = rng.standard_normal((n, n))
    mix = math.sqrt(abs(correlation))
    noise_w = math.sqrt(1.0 - abs(correlation))
    flows = []
    for idx in range(k):
        noise = rng.standard_normal((n, n))
        sign = -1.0 if (idx == 1 and correlation < 0) else 1.0
        field = sign * mix * shared + noise_w * noise
        flow = np.clip(np.rint(50 + 20 * field), 0, None).astype(np.int64)
        np.fill_diagonal(flow, 0)
        flows.append(flow)
    rho = correlation if k == 2 else None
    if not name:
        name = f"rand-n{n}-k{k}-r{correlation:g}-s{seed}"
    return QapInstance(n, distances, tuple(flows), name=name, correlation=rho)
