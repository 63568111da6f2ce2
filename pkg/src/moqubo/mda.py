"""Two-objective annealer sharing one solution across separate penalised QUBOs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .annealer import AnnealParams
from .archive import Archive, ArchiveEntry, nondominated_filter, update_exploit, update_explore
from .qubo import DeltaState, QuboMatrix, build_couplings, random_bits

__all__ = [
    "ObjectivePair",
    "MdaParams",
    "MdaTrace",
    "MdaResult",
    "build_objective_pair",
    "strict_probability",
    "lenient_probability",
    "run_mda",
]

ACCEPTANCE_MODES = ("strict", "lenient")
ARCHIVE_POLICIES = ("explore", "exploit")


@dataclass(frozen=True)
class ObjectivePair:
    """The two penalised objective QUBOs solved jointly."""

    y: QuboMatrix
    z: QuboMatrix

    def __post_init__(self) -> None:
        if self.y.size != self.z.size:
            raise ValueError(f"objectives disagree on size: {self.y.size} vs {self.z.size}")

    @property
    def size(self) -> int:
        return self.y.size


def build_objective_pair(r: QuboMatrix, s: QuboMatrix, g: QuboMatrix,
                         alpha1: int, alpha2: int) -> ObjectivePair:
    """Penalise each cost QUBO with its own constraint weight: ``Y = R + a1 G``, ``Z = S + a2 G``."""
    return ObjectivePair(r.scaled_add(alpha1, g), s.scaled_add(alpha2, g))


@dataclass(frozen=True)
class MdaParams:
    """Run settings: shared anneal schedule, acceptance rule, archive policy and size.

    The anneal schedule's ``beta`` is ignored; this solver escapes through
    its archive instead of an energy offset.
    """

    anneal: AnnealParams
    capacity: int
    acceptance: str = "strict"
    archive_policy: str = "explore"

    def __post_init__(self) -> None:
        if self.acceptance not in ACCEPTANCE_MODES:
            raise ValueError(f"acceptance must be one of {ACCEPTANCE_MODES}, got {self.acceptance!r}")
        if self.archive_policy not in ARCHIVE_POLICIES:
            raise ValueError(f"archive policy must be one of {ARCHIVE_POLICIES}, got {self.archive_policy!r}")
        if self.capacity < 1:
            raise ValueError(f"archive capacity must be positive, got {self.capacity}")


@dataclass
class MdaTrace:
    """Per-iteration record of temperature, archive size, and escape jumps."""

    temperatures: np.ndarray
    archive_sizes: np.ndarray
    escapes: np.ndarray
    coupling_builds: int = 2


@dataclass
class MdaResult:
    """Non-dominated front of the final archive, plus the archive itself."""

    front: list[ArchiveEntry]
    archive_entries: list[ArchiveEntry]
    coupling_builds: int
    trace: MdaTrace | None = None


def _objective_probs(d1: np.ndarray, d2: np.ndarray, temperature: float) -> tuple[np.ndarray, np.ndarray]:
    p1 = np.exp(np.minimum(0.0, -d1 / temperature))
    p2 = np.exp(np.minimum(0.0, -d2 / temperature))
    return p1, p2


def strict_probability(delta_e1: float, delta_e2: float, temperature: float) -> float:
    """Product of the per-objective acceptance probabilities: both must agree."""
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    p1, p2 = _objective_probs(np.float64(delta_e1), np.float64(delta_e2), temperature)
    return float(p1 * p2)


def lenient_probability(delta_e1: float, delta_e2: float, temperature: float) -> float:
    """Larger of the per-objective acceptance probabilities: one objective suffices."""
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    p1, p2 = _objective_probs(np.float64(delta_e1), np.float64(delta_e2), temperature)
    return float(np.maximum(p1, p2))


def run_mda(pair: ObjectivePair, params: MdaParams, *, record_trace: bool = False) -> MdaResult:
    """Anneal both objectives over one shared solution, collecting a Pareto archive.

    Each iteration evaluates both objectives' flip deltas, combines the two
    per-flip acceptance probabilities under the strict or lenient rule, and
    applies one accepted flip chosen uniformly, feeding the new solution to
    the archive. When no flip is accepted the walk restarts from a uniformly
    chosen archive member (deltas recomputed from scratch). The archive is
    seeded with the initial random solution; the final front is its
    non-dominated subset.
    """
    anneal = params.anneal
    rng = np.random.default_rng(anneal.seed)
    py = build_couplings(pair.y)
    pz = build_couplings(pair.z)
    coupling_builds = 2
    m = pair.size
    state = DeltaState([pair.y, pair.z], [py, pz], random_bits(m, rng))
    archive = Archive(capacity=params.capacity)
    archive.entries.append(ArchiveEntry(state.x.copy(), tuple(state.energies)))
    strict = params.acceptance == "strict"
    explore = params.archive_policy == "explore"
    delta = float(anneal.delta0)
    temps = np.empty(anneal.i_max) if record_trace else None
    sizes = np.empty(anneal.i_max, dtype=np.int64) if record_trace else None
    escapes = np.zeros(anneal.i_max, dtype=bool) if record_trace else None
    for it in range(anneal.i_max):
        while delta > anneal.delta_f:
            delta *= 1.0 - anneal.xi
        p1, p2 = _objective_probs(state.deltas[0], state.deltas[1], delta)
        probs = p1 * p2 if strict else np.maximum(p1, p2)
        u = rng.random(m)
        accepted = np.flatnonzero(u < probs)
        if accepted.size:
            i = int(accepted[rng.integers(accepted.size)])
            state.flip(i)
            entry = ArchiveEntry(state.x.copy(), tuple(state.energies))
            if explore:
                update_explore(archive, entry)
            else:
                update_exploit(archive, entry, rng)
        else:
            j = int(rng.integers(len(archive.entries)))
            state.reset(archive.entries[j].solution)
        if record_trace:
            temps[it] = delta
            sizes[it] = len(archive.entries)
            escapes[it] = not accepted.size
    trace = None
    if record_trace:
        trace = MdaTrace(temps, sizes, escapes)
    return MdaResult(
        front=nondominated_filter(archive.entries),
        archive_entries=list(archive.entries),
        coupling_builds=coupling_builds,
        trace=trace,
    )
