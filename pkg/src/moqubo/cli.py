"""Command-line interface: generate instances, run batches, enumerate, compare."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .bench import (
    ALGORITHMS,
    ENUMERATION_CAP,
    UsageError,
    compare_runs,
    enumerate_true_front,
    execute_batch,
    read_front_file,
    resolve_config,
    write_batch,
    write_front_file,
)
from .qap import InstanceParseError, generate_instance, parse_instance, write_instance

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moqubo",
        description="Annealing solvers for single- and bi-objective QUBO assignment problems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random instance file")
    gen.add_argument("--n", type=int, required=True, help="number of locations/facilities")
    gen.add_argument("--k", type=int, choices=(1, 2), default=2, help="number of flow matrices")
    gen.add_argument("--correlation", type=float, default=0.0,
                     help="target correlation between the two flows, in [-1, 1]")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--name", default="", help="instance name recorded in the file")
    gen.add_argument("--out", required=True, help="output instance path")
    gen.set_defaults(func=_cmd_gen)

    run = sub.add_parser("run", help="run one algorithm over a batch of seeds")
    run.add_argument("--instance", help="instance file path")
    run.add_argument("--gen-n", type=int, help="generate the instance instead: size")
    run.add_argument("--gen-k", type=int, choices=(1, 2), help="generated instance: flow count")
    run.add_argument("--gen-correlation", type=float, help="generated instance: flow correlation")
    run.add_argument("--gen-seed", type=int, help="generated instance: generator seed")
    run.add_argument("--algo", dest="algorithm", choices=ALGORITHMS, help="algorithm to run")
    run.add_argument("--acceptance", choices=("strict", "lenient"),
                     help="mda flip acceptance rule")
    run.add_argument("--archive-policy", choices=("explore", "exploit"),
                     help="mda archive update policy")
    run.add_argument("--normalize", action="store_true", default=None,
                     help="rescale cost coefficients to the stock magnitude first")
    run.add_argument("--runs", type=int, help="number of seeded runs (stock: 20)")
    run.add_argument("--seed", type=int, help="base seed; runs use seed..seed+runs-1")
    run.add_argument("--jobs", type=int,
                     help="worker processes (default: MOQUBO_JOBS or 1)")
    run.add_argument("--config", help="JSON file with the same settings as these flags")
    run.add_argument("--i-max", type=int, help="iterations per run (stock: m*m//4)")
    run.add_argument("--delta0", type=float, help="start temperature (stock: 1e9)")
    run.add_argument("--delta-f", type=float, help="final temperature (stock: 1e4)")
    run.add_argument("--xi", type=float, help="temperature decay rate (stock: 0.001)")
    run.add_argument("--beta", type=float,
                     help="offset increment (stock: delta0 / (0.25 m^2); da and sbda only)")
    run.add_argument("--capacity", type=int, help="mda archive capacity (stock: m)")
    run.add_argument("--gammas", help="sbda weights as a comma list (stock: 0.0..1.0 step 0.1)")
    run.add_argument("--out", required=True, help="output directory for fronts and reports")
    run.set_defaults(func=_cmd_run)

    enum = sub.add_parser("enumerate", help="enumerate an instance's true front")
    enum.add_argument("--instance", required=True, help="instance file path")
    enum.add_argument("--max-n", type=int, default=ENUMERATION_CAP,
                      help=f"refuse instances larger than this (default {ENUMERATION_CAP})")
    enum.add_argument("--out", required=True, help="output front file")
    enum.set_defaults(func=_cmd_enumerate)

    cmp_ = sub.add_parser("compare", help="compare result directories on shared bounds")
    cmp_.add_argument("result_dirs", nargs="+", help="two or more run output directories")
    cmp_.add_argument("--reference", help="known front file (e.g. enumerate output)")
    cmp_.add_argument("--no-figures", action="store_true",
                      help="skip rendering the scatter and box plots")
    cmp_.add_argument("--out", required=True, help="output directory for the report")
    cmp_.set_defaults(func=_cmd_compare)
    return parser


def _cmd_gen(args: argparse.Namespace) -> int:
    inst = generate_instance(args.n, args.k, args.correlation, seed=args.seed, name=args.name)
    Path(args.out).write_text(write_instance(inst))
    print(f"wrote {args.out} ({inst.name}: n={inst.n}, k={inst.num_objectives})")
    return 0


def _read_instance_file(path_str: str):
    path = Path(path_str)
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read instance {path}: {exc}") from exc
    return parse_instance(text, name=path.stem)


def _cmd_run(args: argparse.Namespace) -> int:
    jobs = args.jobs
    if jobs is None:
        env = os.environ.get("MOQUBO_JOBS")
        if env is not None:
            try:
                jobs = int(env)
            except ValueError:
                raise UsageError(f"MOQUBO_JOBS must be an integer, got {env!r}") from None
    generator: dict[str, Any] | None = None
    if args.gen_n is not None:
        generator = {"n": args.gen_n}
        if args.gen_k is not None:
            generator["k"] = args.gen_k
        if args.gen_correlation is not None:
            generator["correlation"] = args.gen_correlation
        if args.gen_seed is not None:
            generator["seed"] = args.gen_seed
    elif any(v is not None for v in (args.gen_k, args.gen_correlation, args.gen_seed)):
        raise UsageError("generator flags need --gen-n")
    cli = {
        "instance_path": args.instance,
        "generator": generator,
        "algorithm": args.algorithm,
        "acceptance": args.acceptance,
        "archive_policy": args.archive_policy,
        "normalize": args.normalize,
        "runs": args.runs,
        "seed": args.seed,
        "jobs": jobs,
        "i_max": args.i_max,
        "delta0": args.delta0,
        "delta_f": args.delta_f,
        "xi": args.xi,
        "beta": args.beta,
        "capacity": args.capacity,
        "gammas": _parse_gammas(args.gammas),
    }
    config_file = None
    if args.config:
        try:
            config_file = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config} is not valid JSON: {exc}") from exc
    config = resolve_config(cli, config_file)
    batch = execute_batch(config)
    write_batch(batch, args.out)
    summary_sizes = [run.front_size for run in batch.runs]
    feasible = sum(len(run.solutions) for run in batch.runs)
    total = sum(summary_sizes)
    print(f"{config.algorithm} on {batch.instance.name or 'instance'} "
          f"(n={batch.instance.n}, digest {batch.digest[:12]}): {config.runs} runs")
    print(f"  front size mean {sum(summary_sizes) / len(summary_sizes):.2f}, "
          f"feasible {feasible}/{total}, union front {len(batch.union_front)} points")
    if batch.bounds is not None:
        mean_hv = sum(batch.hypervolumes) / len(batch.hypervolumes)
        print(f"  hypervolume mean {mean_hv:.4f}, union {batch.union_hypervolume:.4f}")
    print(f"  results in {args.out}")
    return 0


def _parse_gammas(text: str | None) -> tuple[float, ...] | None:
    if text is None:
        return None
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"--gammas must be a comma list of numbers, got {text!r}") from None
    if not values:
        raise UsageError("--gammas must not be empty")
    return values


def _cmd_enumerate(args: argparse.Namespace) -> int:
    inst = _read_instance_file(args.instance)
    rows = enumerate_true_front(inst, cap=args.max_n)
    write_front_file(rows, args.out)
    print(f"wrote {len(rows)} non-dominated points for {inst.name or args.instance} to {args.out}")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    reference = read_front_file(args.reference) if args.reference else None
    report = compare_runs(args.result_dirs, reference=reference,
                          out_dir=args.out, render=not args.no_figures)
    width = max(len(label) for label in report["algorithms"])
    print(f"{'algorithm'.ljust(width)}  hv mean+-std      union hv  front mean  time mean s")
    for label, stats in report["algorithms"].items():
        print(f"{label.ljust(width)}  {stats['hypervolume_mean']:.4f}+-{stats['hypervolume_std']:.4f} "
              f" {stats['union_hypervolume']:8.4f}  {stats['front_size_mean']:10.2f} "
              f" {stats['wall_time_mean_s']:11.4f}")
    if report["reference_hypervolume"] is not None:
        print(f"{'reference'.ljust(width)}  {'':16} {report['reference_hypervolume']:9.4f}")
    print(f"report in {args.out}")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InstanceParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
