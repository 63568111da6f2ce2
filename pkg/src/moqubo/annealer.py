"""Single-objective annealer with parallel flip trials and an offset escape."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .qubo import CouplingMatrix, DeltaState, QuboMatrix, build_couplings, random_bits

__all__ = [
    "AnnealParams",
    "AnnealTrace",
    "DaResult",
    "acceptance_probability",
    "default_anneal_params",
    "run_da",
]


@dataclass(frozen=True)
class AnnealParams:
    """Temperature schedule and escape settings for one annealer run.

    ``delta0``/``delta_f`` bound the multiplicative cooling schedule with
    decay rate ``xi``; ``beta`` is the amount added to the energy offset for
    every iteration in which no flip is accepted.
    """

    i_max: int
    delta0: float
    delta_f: float
    xi: float
    beta: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.i_max < 1:
            raise ValueError(f"iteration budget must be positive, got {self.i_max}")
        if not (self.delta0 >= self.delta_f > 0):
            raise ValueError(
                f"temperatures must satisfy delta0 >= delta_f > 0, got {self.delta0}, {self.delta_f}")
        if not 0 < self.xi < 1:
            raise ValueError(f"decay rate must lie in (0, 1), got {self.xi}")
        if self.beta < 0:
            raise ValueError(f"offset increment must be non-negative, got {self.beta}")


def default_anneal_params(m: int, seed: int = 0) -> AnnealParams:
    """Stock settings for an m-variable QUBO.

    Start temperature 1e9 cooling to 1e4 at rate 0.001, an iteration budget
    of a quarter of m squared, and an offset increment of the start
    temperature spread over that budget.
    """
    if m < 1:
        raise ValueError(f"variable count must be positive, got {m}")
    return AnnealParams(
        i_max=(m * m) // 4,
        delta0=1e9,
        delta_f=1e4,
        xi=0.001,
        beta=1e9 / (0.25 * m * m),
        seed=seed,
    )


@dataclass
class AnnealTrace:
    """Per-iteration record of temperature, incumbent energy, and escape offset."""

    temperatures: np.ndarray
    best_energies: np.ndarray
    offsets: np.ndarray
    accepted: np.ndarray
    coupling_builds: int = 1


@dataclass
class DaResult:
    """Best solution visited by a run, with its exact energy."""

    best_x: np.ndarray
    best_energy: int
    trace: AnnealTrace | None = None


def _acceptance_probs(deltas: np.ndarray, e_offset: float, temperature: float) -> np.ndarray:
    return np.exp(np.minimum(0.0, -(deltas - e_offset) / temperature))


def acceptance_probability(delta_e: float, e_offset: float, temperature: float) -> float:
    """Probability ``exp(min(0, -(delta_e - e_offset) / temperature))`` of taking one flip.

    Offset-adjusted improvements are always taken; worsenings decay
    exponentially with their size relative to the temperature.
    """
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    return float(_acceptance_probs(np.float64(delta_e), e_offset, temperature))


def run_da(q: QuboMatrix, params: AnnealParams, *, couplings: CouplingMatrix | None = None,
           record_trace: bool = False) -> DaResult:
    """Anneal one QUBO and return the best solution ever visited.

    Each iteration cools the temperature to the floor if it is still above
    it, evaluates all m single-flip deltas at once, gives every flip an
    independent acceptance trial, and applies one accepted flip chosen
    uniformly. When no flip is accepted the energy offset grows by ``beta``,
    progressively unlocking escapes from local minima; any applied flip
    resets it. Uniform draws are consumed in ascending variable order, so a
    seed fully determines the run.
    """
    rng = np.random.default_rng(params.seed)
    p = build_couplings(q) if couplings is None else couplings
    m = q.size
    state = DeltaState([q], [p], random_bits(m, rng))
    best_x = state.x.copy()
    best_e = state.energies[0]
    delta = float(params.delta0)
    offset = 0.0
    temps = np.empty(params.i_max) if record_trace else None
    bests = np.empty(params.i_max, dtype=np.int64) if record_trace else None
    offsets = np.empty(params.i_max) if record_trace else None
    accepted_flags = np.zeros(params.i_max, dtype=bool) if record_trace else None
    for it in range(params.i_max):
        while delta > params.delta_f:
            delta *= 1.0 - params.xi
        probs = _acceptance_probs(state.deltas[0], offset, delta)
        u = rng.random(m)
        accepted = np.flatnonzero(u < probs)
        if accepted.size:
            i = int(accepted[rng.integers(accepted.size)])
            state.flip(i)
            offset = 0.0
            if state.energies[0] < best_e:
                best_e = state.energies[0]
                best_x = state.x.copy()
        else:
            offset += params.beta
        if record_trace:
            temps[it] = delta
            bests[it] = best_e
            offsets[it] = offset
            accepted_flags[it] = bool(accepted.size)
    trace = None
    if record_trace:
        trace = AnnealTrace(temps, bests, offsets, accepted_flags)
    return DaResult(best_x, best_e, trace)
