"""Grain mixing optimization toolkit.

Exact-rational modeling of the bin/truck/elevator blending problem,
matching-based hardness constructions, brute-force solving oracles, and
batch verification of the matching-size/profit correspondence.
"""

from .model import (
    INF,
    Bin,
    Elevator,
    GmInstance,
    Interval,
    MixingMatrix,
    PriceEntry,
    PriceSchedule,
    ProfitReport,
    Solution,
    Trip,
    Truck,
    Violation,
    evaluate,
    is_infinite,
    load_protein,
    price_lookup,
    validate,
)
from .reduction import (
    PlanarParams,
    ReductionArtifacts,
    StdParams,
    assign_proteins,
    compute_params,
    matched_solution,
    reduce_planar,
    reduce_standard,
)
from .solve import SolveConfig, solve_exact, solve_local_search, unmixed_baseline
from .tdm import TdmInstance, gen_random_tdm, is_matching, max_matching
from .verify import (
    CorrespondenceReport,
    audit_offpair,
    batch_planar,
    batch_standard,
    check_planar,
    check_standard,
    extract_matching,
    max_offpair_load,
    offpair_profit_bound,
    repair_submaximal,
)

__all__ = [
    "INF",
    "Bin",
    "CorrespondenceReport",
    "Elevator",
    "GmInstance",
    "Interval",
    "MixingMatrix",
    "PlanarParams",
    "PriceEntry",
    "PriceSchedule",
    "ProfitReport",
    "ReductionArtifacts",
    "Solution",
    "SolveConfig",
    "StdParams",
    "TdmInstance",
    "Trip",
    "Truck",
    "Violation",
    "assign_proteins",
    "audit_offpair",
    "batch_planar",
    "batch_standard",
    "check_planar",
    "check_standard",
    "compute_params",
    "evaluate",
    "extract_matching",
    "gen_random_tdm",
    "is_infinite",
    "is_matching",
    "load_protein",
    "matched_solution",
    "max_matching",
    "max_offpair_load",
    "offpair_profit_bound",
    "price_lookup",
    "reduce_planar",
    "reduce_standard",
    "repair_submaximal",
    "solve_exact",
    "solve_local_search",
    "unmixed_baseline",
    "validate",
]

__version__ = "0.1.0"
