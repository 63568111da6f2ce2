"""Weighted-sum scalarisation driver: one annealer run per aggregation weight."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .annealer import AnnealParams, run_da
from .archive import ArchiveEntry, nondominated_filter
from .qap import decode_solution, penalty_weight
from .qubo import QuboMatrix, build_couplings, energy

__all__ = [
    "DEFAULT_GAMMAS",
    "GammaRecord",
    "SbdaResult",
    "aggregate_cost",
    "derive_seed",
    "run_sbda",
]

# eleven evenly spaced aggregation weights from 0 to 1
DEFAULT_GAMMAS = tuple(i / 10 for i in range(11))


def aggregate_cost(r: QuboMatrix, s: QuboMatrix, gamma: float) -> QuboMatrix:
    """Convex combination ``gamma * R + (1 - gamma) * S`` rounded back to integers."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"aggregation weight must lie in [0, 1], got {gamma}")
    if r.size != s.size:
        raise ValueError(f"objectives disagree on size: {r.size} vs {s.size}")
    coeffs = np.rint(gamma * r.coeffs + (1.0 - gamma) * s.coeffs).astype(np.int64)
    constant = int(np.rint(gamma * r.constant + (1.0 - gamma) * s.constant))
    return QuboMatrix(coeffs, constant)


def derive_seed(base_seed: int, index: int) -> int:
    """Stable per-subrun seed derived from a base seed and a subrun index."""
    return int(np.random.SeedSequence([base_seed, index]).generate_state(1, np.uint64)[0])


@dataclass
class GammaRecord:
    """Outcome of the annealer run for one aggregation weight."""

    gamma: float
    seed: int
    alpha: int
    solution: np.ndarray
    aggregate_energy: int
    energies: tuple[int, int]       # under the penalised pair (Y, Z)
    cost_energies: tuple[int, int]  # under the raw cost QUBOs (R, S)
    feasible: bool


@dataclass
class SbdaResult:
    """Non-dominated feasible front over all weights, plus every per-weight record."""

    front: list[ArchiveEntry]
    per_gamma: list[GammaRecord]
    coupling_builds: int


def run_sbda(r: QuboMatrix, s: QuboMatrix, g: QuboMatrix, anneal: AnnealParams,
             gammas: tuple[float, ...] = DEFAULT_GAMMAS) -> SbdaResult:
    """Sweep the aggregation weights, annealing each scalarised QUBO once.

    For each weight the two cost QUBOs are combined, a fresh constraint
    weight is estimated from the combination, and the penalised QUBO gets
    one annealer run (couplings rebuilt per weight, so the setup cost scales
    with the number of weights). Every returned solution is re-evaluated
    under the per-objective penalised pair built from ``r`` and ``s`` with
    their own constraint weights, so fronts are comparable with the
    Pareto-archive solver's output. Infeasible best solutions are recorded
    and flagged but excluded from the front.
    """
    if r.size != s.size or r.size != g.size:
        raise ValueError("cost and constraint QUBOs must agree on size")
    n = math.isqrt(r.size)
    if n * n != r.size:
        raise ValueError(f"variable count {r.size} is not a squared assignment size")
    alpha1 = penalty_weight(r)
    alpha2 = penalty_weight(s)
    y = r.scaled_add(alpha1, g)
    z = s.scaled_add(alpha2, g)
    records: list[GammaRecord] = []
    coupling_builds = 0
    for idx, gamma in enumerate(gammas):
        c = aggregate_cost(r, s, gamma)
        alpha = penalty_weight(c)
        q = c.scaled_add(alpha, g)
        couplings = build_couplings(q)
        coupling_builds += 1
        seed = derive_seed(anneal.seed, idx)
        result = run_da(q, replace(anneal, seed=seed), couplings=couplings)
        x = result.best_x
        records.append(GammaRecord(
            gamma=gamma,
            seed=seed,
            alpha=int(alpha),
            solution=x,
            aggregate_energy=result.best_energy,
            energies=(int(energy(y, x)), int(energy(z, x))),
            cost_energies=(int(energy(r, x)), int(energy(s, x))),
            feasible=decode_solution(x, n) is not None,
        ))
    front = nondominated_filter(
        ArchiveEntry(rec.solution, rec.energies) for rec in records if rec.feasible)
    return SbdaResult(front=front, per_gamma=records, coupling_builds=coupling_builds)
