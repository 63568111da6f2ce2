"""Multi-objective QUBO annealing toolkit.

Builds binary quadratic models for bi-objective quadratic assignment
instances and solves them with a parallel-trial annealer, either through
weighted-sum scalarisation or with a Pareto-archive annealer that keeps
both objectives separate.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .annealer import (
    AnnealParams,
    AnnealTrace,
    acceptance_probability,
    default_anneal_params,
    run_da,
)
from .archive import (
    Archive,
    ArchiveEntry,
    Relation,
    compare,
    nondominated_filter,
    update_exploit,
    update_explore,
)
from .mda import (
    MdaParams,
    ObjectivePair,
    build_objective_pair,
    lenient_probability,
    run_mda,
    strict_probability,
)
from .metrics import (
    MetricReport,
    NormalisationBounds,
    bounds_from_sets,
    hypervolume_2d,
    normalize_points,
)
from .qap import (
    PenaltyWeights,
    QapInstance,
    build_constraint_qubo,
    build_cost_qubo,
    decode_solution,
    encode_permutation,
    generate_instance,
    parse_instance,
    penalty_weight,
    normalize_qubo,
    qap_cost,
    write_instance,
)
from .qubo import (
    CouplingMatrix,
    DeltaState,
    QuboMatrix,
    build_couplings,
    energy,
    flip_deltas,
)
from .sbda import aggregate_cost, run_sbda

__all__ = [
    "AnnealParams",
    "AnnealTrace",
    "Archive",
    "ArchiveEntry",
    "CouplingMatrix",
    "DeltaState",
    "MdaParams",
    "MetricReport",
    "NormalisationBounds",
    "ObjectivePair",
    "PenaltyWeights",
    "QapInstance",
    "QuboMatrix",
    "Relation",
    "acceptance_probability",
    "aggregate_cost",
    "bounds_from_sets",
    "build_constraint_qubo",
    "build_cost_qubo",
    "build_couplings",
    "build_objective_pair",
    "compare",
    "decode_solution",
    "default_anneal_params",
    "encode_permutation",
    "energy",
    "flip_deltas",
    "generate_instance",
    "hypervolume_2d",
    "lenient_probability",
    "nondominated_filter",
    "normalize_points",
    "normalize_qubo",
    "parse_instance",
    "penalty_weight",
    "qap_cost",
    "run_da",
    "run_mda",
    "run_sbda",
    "strict_probability",
    "update_exploit",
    "update_explore",
    "write_instance",
]
