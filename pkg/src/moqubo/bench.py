"""Benchmark harness: resolve run settings, execute seeded batches, write reports."""

from __future__ import annotations

import concurrent.futures
import hashlib
import itertools
import json
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from . import __version__
from .annealer import AnnealParams, run_da
from .archive import ArchiveEntry, nondominated_filter
from .mda import MdaParams, build_objective_pair, run_mda
from .metrics import NormalisationBounds, bounds_from_sets, hypervolume_2d, normalize_points
from .qap import (
    QapInstance,
    build_constraint_qubo,
    build_cost_qubo,
    decode_solution,
    encode_permutation,
    generate_instance,
    normalize_qubo,
    parse_instance,
    penalty_weight,
    qap_cost,
    write_instance,
)
from .sbda import DEFAULT_GAMMAS, run_sbda

__all__ = [
    "ALGORITHMS",
    "UsageError",
    "GeneratorSpec",
    "RunConfig",
    "SolutionRow",
    "SingleRun",
    "BatchResult",
    "resolve_config",
    "load_instance",
    "instance_digest",
    "resolve_anneal",
    "execute_single",
    "execute_batch",
    "write_batch",
    "load_batch_dir",
    "compare_runs",
    "enumerate_true_front",
    "write_front_file",
    "read_front_file",
]

ALGORITHMS = ("da", "sbda", "mda")

ENUMERATION_CAP = 10

_MDA_ONLY_KEYS = ("acceptance", "archive_policy", "capacity")


class UsageError(ValueError):
    """A setting combination the command line should reject."""


@dataclass(frozen=True)
class GeneratorSpec:
    """Settings for generating an instance instead of reading one."""

    n: int
    k: int = 2
    correlation: float = 0.0
    seed: int = 0
    name: str = ""


@dataclass(frozen=True)
class RunConfig:
    """One batch of annealer runs: problem source, algorithm, and overrides.

    Unset schedule fields resolve against the instance size m: the iteration
    budget defaults to a quarter of m squared, the offset increment to the
    start temperature spread over that budget, and the archive capacity to m.
    """

    instance_path: str | None = None
    generator: GeneratorSpec | None = None
    algorithm: str = "mda"
    acceptance: str = "strict"
    archive_policy: str = "explore"
    normalize: bool = False
    runs: int = 20
    seed: int = 0
    jobs: int = 1
    i_max: int | None = None
    delta0: float = 1e9
    delta_f: float = 1e4
    xi: float = 0.001
    beta: float | None = None
    capacity: int | None = None
    gammas: tuple[float, ...] = DEFAULT_GAMMAS

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise UsageError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if (self.instance_path is None) == (self.generator is None):
            raise UsageError("exactly one of an instance path or a generator spec is required")
        if self.runs < 1:
            raise UsageError(f"runs must be positive, got {self.runs}")
        if self.jobs < 1:
            raise UsageError(f"jobs must be positive, got {self.jobs}")


def resolve_config(cli: Mapping[str, Any] | None = None,
                   config_file: Mapping[str, Any] | None = None) -> RunConfig:
    """Merge explicit settings over config-file settings over stock defaults.

    ``cli`` entries with value None count as unset. Settings that only make
    sense for one algorithm (acceptance rule, archive policy, or capacity
    outside the Pareto solver; scalarisation weights outside the weighted
    driver; an offset increment for the Pareto solver, which has none) are
    rejected when given explicitly.
    """
    fields = RunConfig.__dataclass_fields__
    merged: dict[str, Any] = {}
    explicit: set[str] = set()
    for source in (config_file or {}, cli or {}):
        for key, value in source.items():
            if key not in fields:
                raise UsageError(f"unknown setting {key!r}")
            if value is None:
                continue
            merged[key] = value
            explicit.add(key)
    if isinstance(merged.get("generator"), Mapping):
        merged["generator"] = GeneratorSpec(**merged["generator"])
    if "gammas" in merged:
        merged["gammas"] = tuple(float(g) for g in merged["gammas"])
    config = RunConfig(**merged)
    if config.algorithm != "mda":
        for key in _MDA_ONLY_KEYS:
            if key in explicit:
                raise UsageError(f"{key!r} only applies to the mda algorithm")
    if config.algorithm != "sbda" and "gammas" in explicit:
        raise UsageError("'gammas' only applies to the sbda algorithm")
    if config.algorithm == "mda" and "beta" in explicit:
        raise UsageError("'beta' does not apply to the mda algorithm")
    return config


def load_instance(config: RunConfig) -> QapInstance:
    """Read the configured instance file, or generate one from the generator settings."""
    if config.instance_path is not None:
        path = Path(config.instance_path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read instance {path}: {exc}") from exc
        return parse_instance(text, name=path.stem)
    spec = config.generator
    return generate_instance(spec.n, spec.k, spec.correlation, seed=spec.seed, name=spec.name)


def instance_digest(inst: QapInstance) -> str:
    """Identity of an instance: the SHA-256 of its canonical text form."""
    return hashlib.sha256(write_instance(inst).encode()).hexdigest()


def resolve_anneal(config: RunConfig, m: int, seed: int) -> AnnealParams:
    """Fill the schedule for an m-variable problem, applying any overrides."""
    i_max = config.i_max if config.i_max is not None else (m * m) // 4
    beta = config.beta if config.beta is not None else config.delta0 / (0.25 * m * m)
    return AnnealParams(i_max=i_max, delta0=config.delta0, delta_f=config.delta_f,
                        xi=config.xi, beta=beta, seed=seed)


@dataclass(frozen=True)
class SolutionRow:
    """One feasible front member: its assignment and true per-objective costs."""

    permutation: tuple[int, ...]
    objectives: tuple[int, ...]


@dataclass
class SingleRun:
    """Outcome of one seeded run: the returned front reduced to feasible rows."""

    seed: int
    wall_time_s: float
    front_size: int
    solutions: list[SolutionRow]
    infeasible: int


def _cost_qubos(inst: QapInstance, config: RunConfig) -> list:
    qubos = [build_cost_qubo(inst, k) for k in range(inst.num_objectives)]
    if config.normalize:
        qubos = [normalize_qubo(q) for q in qubos]
    return qubos


def _rows_from_entries(entries: Sequence[ArchiveEntry], inst: QapInstance) -> tuple[list[SolutionRow], int]:
    rows: list[SolutionRow] = []
    infeasible = 0
    for entry in entries:
        sigma = decode_solution(entry.solution, inst.n)
        if sigma is None:
            infeasible += 1
            continue
        objectives = tuple(int(qap_cost(inst, sigma, k)) for k in range(inst.num_objectives))
        rows.append(SolutionRow(tuple(int(v) for v in sigma), objectives))
    return rows, infeasible


def execute_single(config: RunConfig, seed: int) -> SingleRun:
    """Run the configured algorithm once; deterministic in (config, seed).

    The timed region covers everything the algorithm itself does, including
    per-weight aggregation and coupling construction, but not reading the
    instance or building the shared cost and constraint matrices.
    """
    inst = load_instance(config)
    if config.algorithm == "da" and inst.num_objectives != 1:
        raise UsageError("the da algorithm needs a single-flow instance (K = 1)")
    if config.algorithm in ("sbda", "mda") and inst.num_objectives != 2:
        raise UsageError(f"the {config.algorithm} algorithm needs a two-flow instance (K = 2)")
    costs = _cost_qubos(inst, config)
    g = build_constraint_qubo(inst.n)
    m = inst.qubo_size
    anneal = resolve_anneal(config, m, seed)

    start = time.perf_counter()
    if config.algorithm == "da":
        c = costs[0]
        q = c.scaled_add(penalty_weight(c), g)
        result = run_da(q, anneal)
        entries = [ArchiveEntry(result.best_x, (result.best_energy,))]
    elif config.algorithm == "sbda":
        result = run_sbda(costs[0], costs[1], g, anneal, gammas=config.gammas)
        entries = result.front
    else:
        pair = build_objective_pair(costs[0], costs[1], g,
                                    penalty_weight(costs[0]), penalty_weight(costs[1]))
        capacity = config.capacity if config.capacity is not None else m
        params = MdaParams(anneal=anneal, capacity=capacity,
                           acceptance=config.acceptance, archive_policy=config.archive_policy)
        entries = run_mda(pair, params).front
    wall = time.perf_counter() - start

    rows, infeasible = _rows_from_entries(entries, inst)
    return SingleRun(seed=seed, wall_time_s=wall, front_size=len(entries),
                     solutions=rows, infeasible=infeasible)


def _execute_single_job(job: tuple[RunConfig, int]) -> SingleRun:
    return execute_single(*job)


@dataclass
class BatchResult:
    """All runs of one configuration plus batch-level metrics."""

    config: RunConfig
    instance: QapInstance
    digest: str
    alphas: tuple[int, ...]
    runs: list[SingleRun]
    bounds: NormalisationBounds | None
    hypervolumes: list[float]
    union_front: list[SolutionRow]
    union_hypervolume: float


def _union_rows(runs: Sequence[SingleRun]) -> list[SolutionRow]:
    by_perm: dict[tuple[int, ...], SolutionRow] = {}
    for run in runs:
        for row in run.solutions:
            by_perm.setdefault(row.permutation, row)
    rows = sorted(by_perm.values(), key=lambda r: (r.objectives, r.permutation))
    if not rows or len(rows[0].objectives) < 2:
        return rows
    entries = [ArchiveEntry(np.asarray(r.permutation), r.objectives) for r in rows]
    kept = {tuple(int(v) for v in e.solution) for e in nondominated_filter(entries)}
    return [r for r in rows if r.permutation in kept]


def _batch_metrics(runs: Sequence[SingleRun]) -> tuple[NormalisationBounds | None, list[float], float]:
    point_sets = [[row.objectives for row in run.solutions] for run in runs]
    union = [p for pts in point_sets for p in pts]
    if not union or len(union[0]) < 2:
        return None, [0.0] * len(runs), 0.0
    bounds = bounds_from_sets(point_sets)
    hvs = [
        hypervolume_2d(normalize_points(np.asarray(pts, dtype=float).reshape(-1, 2), bounds))
        if pts else 0.0
        for pts in point_sets
    ]
    union_hv = hypervolume_2d(normalize_points(np.asarray(union, dtype=float), bounds))
    return bounds, hvs, union_hv


def execute_batch(config: RunConfig) -> BatchResult:
    """Run all seeds of a configuration, in parallel when jobs > 1.

    Every run is a pure function of (config, seed), so results do not depend
    on worker scheduling; seeds are ``seed .. seed + runs - 1``.
    """
    inst = load_instance(config)
    costs = _cost_qubos(inst, config)
    alphas = tuple(int(penalty_weight(c)) for c in costs)
    seeds = range(config.seed, config.seed + config.runs)
    if config.jobs == 1:
        runs = [execute_single(config, s) for s in seeds]
    else:
        jobs = [(config, s) for s in seeds]
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as pool:
            runs = list(pool.map(_execute_single_job, jobs))
    bounds, hvs, union_hv = _batch_metrics(runs)
    return BatchResult(config=config, instance=inst, digest=instance_digest(inst),
                       alphas=alphas, runs=runs, bounds=bounds, hypervolumes=hvs,
                       union_front=_union_rows(runs), union_hypervolume=union_hv)


def _config_dict(config: RunConfig) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key in RunConfig.__dataclass_fields__:
        value = getattr(config, key)
        if isinstance(value, GeneratorSpec):
            value = {k: getattr(value, k) for k in GeneratorSpec.__dataclass_fields__}
        elif isinstance(value, tuple):
            value = list(value)
        out[key] = value
    return out


def write_batch(batch: BatchResult, out_dir: Path | str) -> dict[str, Path]:
    """Write per-run front files, a metrics table, and the aggregate report.

    Front files are headerless delimited text, one point per line, first
    objective first; identical settings produce byte-identical front and
    metrics files, with wall times confined to the aggregate report.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}
    for run in batch.runs:
        front_path = out / f"front_run{run.seed}.csv"
        front_path.write_text(
            "".join(",".join(str(v) for v in row.objectives) + "\n" for row in run.solutions))
        paths[f"front_run{run.seed}"] = front_path

    metrics_path = out / "metrics.csv"
    lines = ["seed,front_size,feasible,infeasible,hypervolume"]
    for run, hv in zip(batch.runs, batch.hypervolumes):
        lines.append(f"{run.seed},{run.front_size},{len(run.solutions)},{run.infeasible},{hv:.12g}")
    metrics_path.write_text("\n".join(lines) + "\n")
    paths["metrics"] = metrics_path

    sizes = np.array([run.front_size for run in batch.runs], dtype=float)
    times = np.array([run.wall_time_s for run in batch.runs])
    hvs = np.array(batch.hypervolumes)
    aggregate = {
        "version": __version__,
        "config": _config_dict(batch.config),
        "instance": {
            "name": batch.instance.name,
            "n": batch.instance.n,
            "k": batch.instance.num_objectives,
            "correlation": batch.instance.correlation,
            "digest": batch.digest,
            "text": write_instance(batch.instance),
        },
        "alphas": list(batch.alphas),
        "bounds": None if batch.bounds is None else {
            "lower": list(map(float, batch.bounds.lower)),
            "upper": list(map(float, batch.bounds.upper)),
        },
        "per_run": [
            {
                "seed": run.seed,
                "wall_time_s": run.wall_time_s,
                "front_size": run.front_size,
                "infeasible": run.infeasible,
                "hypervolume": hv,
                "solutions": [
                    {"permutation": list(row.permutation), "objectives": list(row.objectives)}
                    for row in run.solutions
                ],
            }
            for run, hv in zip(batch.runs, batch.hypervolumes)
        ],
        "union_front": [
            {"permutation": list(row.permutation), "objectives": list(row.objectives)}
            for row in batch.union_front
        ],
        "union_hypervolume": batch.union_hypervolume,
        "summary": {
            "front_size_mean": float(sizes.mean()),
            "front_size_std": float(sizes.std(ddof=1)) if len(sizes) > 1 else 0.0,
            "hypervolume_mean": float(hvs.mean()) if hvs.size else 0.0,
            "hypervolume_std": float(hvs.std(ddof=1)) if hvs.size > 1 else 0.0,
            "wall_time_mean_s": float(times.mean()),
            "wall_time_std_s": float(times.std(ddof=1)) if len(times) > 1 else 0.0,
        },
    }
    aggregate_path = out / "aggregate.json"
    aggregate_path.write_text(json.dumps(aggregate, indent=2) + "\n")
    paths["aggregate"] = aggregate_path
    return paths


def load_batch_dir(result_dir: Path | str) -> dict[str, Any]:
    """Load an aggregate report, re-validating every stored solution.

    Each permutation must round-trip through the one-hot encoding and its
    stored objective values must equal a direct cost evaluation against the
    embedded instance; any mismatch raises ValueError.
    """
    path = Path(result_dir) / "aggregate.json"
    data = json.loads(path.read_text())
    inst = parse_instance(data["instance"]["text"], name=data["instance"]["name"])
    if instance_digest(inst) != data["instance"]["digest"]:
        raise ValueError(f"{path}: instance text does not match its recorded digest")
    for run in data["per_run"]:
        for sol in run["solutions"]:
            sigma = np.asarray(sol["permutation"], dtype=np.int64)
            x = encode_permutation(sigma, inst.n)
            decoded = decode_solution(x, inst.n)
            if decoded is None or not np.array_equal(decoded, sigma):
                raise ValueError(f"{path}: permutation {sol['permutation']} does not round-trip")
            expected = [int(qap_cost(inst, sigma, k)) for k in range(inst.num_objectives)]
            if list(sol["objectives"]) != expected:
                raise ValueError(
                    f"{path}: stored objectives {sol['objectives']} != evaluated {expected}")
    return data


def _label_for(result_dir: Path, data: Mapping[str, Any], used: set[str]) -> str:
    label = Path(result_dir).name or data["config"]["algorithm"]
    if label in used:
        base, k = label, 2
        while f"{base}-{k}" in used:
            k += 1
        label = f"{base}-{k}"
    used.add(label)
    return label


def compare_runs(result_dirs: Sequence[Path | str], reference: Sequence[Sequence[float]] | None = None,
                 out_dir: Path | str | None = None, render: bool = True) -> dict[str, Any]:
    """Put several result sets on shared normalisation bounds and tabulate them.

    All sets must come from the same instance. Per-run hypervolumes are
    recomputed under bounds spanning every set plus the optional reference
    front, so values are directly comparable across algorithms. Writes a
    per-run table, a summary table, and (by default) a front scatter plot
    and a hypervolume box plot next to them.
    """
    if len(result_dirs) < 2:
        raise ValueError("need at least two result directories to compare")
    loaded = [(Path(d), load_batch_dir(d)) for d in result_dirs]
    digests = {data["instance"]["digest"] for _, data in loaded}
    if len(digests) != 1:
        raise ValueError("result directories come from different instances")

    used: set[str] = set()
    labels = [_label_for(d, data, used) for d, data in loaded]
    per_label_sets = {
        label: [[tuple(sol["objectives"]) for sol in run["solutions"]] for run in data["per_run"]]
        for label, (_, data) in zip(labels, loaded)
    }
    all_sets: list[list[tuple[float, ...]]] = [pts for sets in per_label_sets.values() for pts in sets]
    ref_points = [tuple(map(float, p)) for p in reference] if reference else None
    bounds = bounds_from_sets(all_sets, known_front=ref_points)

    def hv(points: Sequence[Sequence[float]]) -> float:
        if not len(points):
            return 0.0
        return hypervolume_2d(normalize_points(np.asarray(points, dtype=float).reshape(-1, 2), bounds))

    report: dict[str, Any] = {
        "bounds": {"lower": list(map(float, bounds.lower)), "upper": list(map(float, bounds.upper))},
        "reference_hypervolume": hv(ref_points) if ref_points else None,
        "algorithms": {},
    }
    for label, (_, data) in zip(labels, loaded):
        sets = per_label_sets[label]
        union = {p for pts in sets for p in pts}
        union_front = [row.objectives for row in _union_rows_from_points(union)]
        sizes = np.array([run["front_size"] for run in data["per_run"]], dtype=float)
        times = np.array([run["wall_time_s"] for run in data["per_run"]])
        hvs = np.array([hv(pts) for pts in sets])
        report["algorithms"][label] = {
            "per_run": [
                {"seed": run["seed"], "front_size": run["front_size"],
                 "infeasible": run["infeasible"], "hypervolume": float(v),
                 "wall_time_s": run["wall_time_s"]}
                for run, v in zip(data["per_run"], hvs)
            ],
            "front_size_mean": float(sizes.mean()),
            "front_size_std": float(sizes.std(ddof=1)) if sizes.size > 1 else 0.0,
            "hypervolume_mean": float(hvs.mean()) if hvs.size else 0.0,
            "hypervolume_std": float(hvs.std(ddof=1)) if hvs.size > 1 else 0.0,
            "union_front": sorted(union_front),
            "union_hypervolume": hv(sorted(union_front)),
            "wall_time_mean_s": float(times.mean()),
            "wall_time_std_s": float(times.std(ddof=1)) if times.size > 1 else 0.0,
        }

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        lines = ["algorithm,seed,front_size,infeasible,hypervolume,wall_time_s"]
        for label in labels:
            for row in report["algorithms"][label]["per_run"]:
                lines.append(f"{label},{row['seed']},{row['front_size']},{row['infeasible']},"
                             f"{row['hypervolume']:.12g},{row['wall_time_s']:.6f}")
        (out / "comparison.csv").write_text("\n".join(lines) + "\n")
        lines = ["algorithm,runs,front_size_mean,front_size_std,hypervolume_mean,hypervolume_std,"
                 "union_hypervolume,wall_time_mean_s,wall_time_std_s"]
        for label in labels:
            a = report["algorithms"][label]
            lines.append(f"{label},{len(a['per_run'])},{a['front_size_mean']:.6g},"
                         f"{a['front_size_std']:.6g},{a['hypervolume_mean']:.12g},"
                         f"{a['hypervolume_std']:.12g},{a['union_hypervolume']:.12g},"
                         f"{a['wall_time_mean_s']:.6f},{a['wall_time_std_s']:.6f}")
        (out / "summary.csv").write_text("\n".join(lines) + "\n")
        (out / "comparison.json").write_text(json.dumps(report, indent=2) + "\n")
        if render:
            from .plots import render_front_scatter, render_hypervolume_box

            fronts = {label: report["algorithms"][label]["union_front"] for label in labels}
            render_front_scatter(fronts, out / "fronts.png", reference=ref_points)
            render_hypervolume_box(
                {label: [r["hypervolume"] for r in report["algorithms"][label]["per_run"]]
                 for label in labels},
                out / "hypervolume.png")
    return report


def _union_rows_from_points(points: set[tuple[int, ...]]) -> list[SolutionRow]:
    rows = [SolutionRow((), tuple(int(v) for v in p)) for p in sorted(points)]
    if not rows or len(rows[0].objectives) < 2:
        return rows
    entries = [ArchiveEntry(np.asarray(r.objectives), r.objectives) for r in rows]
    kept = {e.energies for e in nondominated_filter(entries)}
    return [r for r in rows if r.objectives in kept]


def enumerate_true_front(inst: QapInstance, cap: int = ENUMERATION_CAP) -> list[SolutionRow]:
    """Enumerate all n! assignments and keep the non-dominated cost vectors.

    Each surviving cost vector carries its lexicographically first
    permutation as a representative. Refuses instances above the cap, since
    the enumeration grows factorially.
    """
    if inst.n > cap:
        raise ValueError(f"enumeration supports n <= {cap}, got {inst.n}")
    best: dict[tuple[int, ...], tuple[int, ...]] = {}
    for perm in itertools.permutations(range(inst.n)):
        sigma = np.asarray(perm, dtype=np.int64)
        point = tuple(int(qap_cost(inst, sigma, k)) for k in range(inst.num_objectives))
        best.setdefault(point, perm)
    points = sorted(best)
    if len(points[0]) >= 2:
        arr = np.asarray(points, dtype=np.int64)
        le = (arr[:, None, :] <= arr[None, :, :]).all(-1)
        lt = (arr[:, None, :] < arr[None, :, :]).any(-1)
        keep = ~(le & lt).any(axis=0)
        points = [p for p, k in zip(points, keep) if k]
    else:
        points = [min(points)]
    return [SolutionRow(tuple(best[p]), p) for p in points]


def write_front_file(rows: Sequence[SolutionRow], path: Path | str) -> Path:
    """Write front rows as delimited text: objectives first, then the assignment."""
    path = Path(path)
    lines = []
    for row in rows:
        cols = [str(v) for v in row.objectives]
        if row.permutation:
            cols.append(" ".join(str(v) for v in row.permutation))
        lines.append(",".join(cols))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_front_file(path: Path | str) -> list[tuple[float, ...]]:
    """Read the objective columns back from a front file."""
    points = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        cols = line.split(",")
        values = []
        for col in cols:
            try:
                values.append(float(col))
            except ValueError:
                break
        if not values:
            raise ValueError(f"{path}: line {line!r} has no numeric columns")
        points.append(tuple(values))
    return points
