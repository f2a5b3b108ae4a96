"""
Solvers
=======

The PCD particle swarm solver and its crossover variant.
"""
from solvers.config import SwarmConfig, variant_config, variant_names
from solvers.crossover import arithmetic_crossover, crossover, crossover_probabilities
from solvers.inertia import (
    AdaptiveInertia,
    ConstrictionInertia,
    FixedInertia,
    constriction_factor,
    inertia_weight,
)
from solvers.pcd import PcdSolver, solve
from solvers.trace import RunTrace, read_trace_csv, write_trace_csv

__all__ = [
    "AdaptiveInertia",
    "ConstrictionInertia",
    "FixedInertia",
    "PcdSolver",
    "RunTrace",
    "SwarmConfig",
    "arithmetic_crossover",
    "constriction_factor",
    "crossover",
    "crossover_probabilities",
    "inertia_weight",
    "read_trace_csv",
    "solve",
    "variant_config",
    "variant_names",
    "write_trace_csv",
]
