"""Dominance comparisons and bounded Pareto archives."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Relation",
    "ArchiveEntry",
    "Archive",
    "compare",
    "dominates",
    "update_explore",
    "update_exploit",
    "nondominated_filter",
]


class Relation(Enum):
    EQUIVALENT = "equivalent"
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated_by"
    INCOMPARABLE = "incomparable"


def compare(u: Sequence[int | float], v: Sequence[int | float]) -> Relation:
    """Pareto relation of energy vector u to v under minimisation."""
    if len(u) != len(v):
        raise ValueError(f"energy vectors differ in length: {len(u)} vs {len(v)}")
    better = worse = False
    for a, b in zip(u, v):
        if a < b:
            better = True
        elif a > b:
            worse = True
    if better and worse:
        return Relation.INCOMPARABLE
    if better:
        return Relation.DOMINATES
    if worse:
        return Relation.DOMINATED_BY
    return Relation.EQUIVALENT


def dominates(u: Sequence[int | float], v: Sequence[int | float]) -> bool:
    """True when u is at least as good everywhere and strictly better somewhere."""
    return compare(u, v) is Relation.DOMINATES


@dataclass
class ArchiveEntry:
    """One stored solution with its exact per-objective energies."""

    solution: np.ndarray
    energies: tuple[int, ...]


@dataclass
class Archive:
    """Bounded list of solutions maintained by the update policies below."""

    capacity: int
    entries: list[ArchiveEntry] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise ValueError(f"archive capacity must be positive, got {self.capacity}")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _holds_identical(archive: Archive, entry: ArchiveEntry) -> bool:
    # energies are cheap to compare, bits only checked on an energy match
    return any(stored.energies == entry.energies
               and np.array_equal(stored.solution, entry.solution)
               for stored in archive.entries)


def update_explore(archive: Archive, entry: ArchiveEntry) -> None:
    """Insert greedily: replace the first dominated member, else append if room.

    Dominated members beyond the first survive, and entries dominated by the
    archive are still appended while capacity remains; the archive may hold
    dominated solutions by design. Bit-identical duplicates are dropped.
    """
    if _holds_identical(archive, entry):
        return
    for idx, stored in enumerate(archive.entries):
        if dominates(entry.energies, stored.energies):
            archive.entries[idx] = entry
            return
    if len(archive.entries) < archive.capacity:
        archive.entries.append(entry)


def update_exploit(archive: Archive, entry: ArchiveEntry, rng: np.random.Generator) -> None:
    """Insert conservatively: reject anything dominated, replace a random victim.

    An entry dominated by any member is discarded. Otherwise it overwrites a
    uniformly chosen member it dominates, or is appended if none exists and
    there is room. Equivalent energies do not count as dominated, so ties
    stay insertable. Consumes one uniform draw only when a victim exists.
    """
    if _holds_identical(archive, entry):
        return
    if any(dominates(stored.energies, entry.energies) for stored in archive.entries):
        return
    victims = [idx for idx, stored in enumerate(archive.entries)
               if dominates(entry.energies, stored.energies)]
    if victims:
        archive.entries[victims[int(rng.integers(len(victims)))]] = entry
        return
    if len(archive.entries) < archive.capacity:
        archive.entries.append(entry)


def nondominated_filter(entries: Iterable[ArchiveEntry]) -> list[ArchiveEntry]:
    """Entries not dominated by any other, preserving input order.

    Solutions with equivalent energies are all retained unless bit-identical,
    in which case only the first occurrence survives.
    """
    unique: list[ArchiveEntry] = []
    seen: set[bytes] = set()
    for entry in entries:
        key = np.asarray(entry.solution, dtype=np.int64).tobytes()
        if key in seen:
            continue
        seen.add(key)
        unique.append(entry)
    if not unique:
        return []
    e = np.array([entry.energies for entry in unique], dtype=np.int64)
    le = (e[:, None, :] <= e[None, :, :]).all(axis=-1)
    lt = (e[:, None, :] < e[None, :, :]).any(axis=-1)
    dominated = (le & lt).any(axis=0)
    return [entry for entry, dead in zip(unique, dominated) if not dead]
