"""
Oracle Tool
===========

Centralized ground truth: full-assignment fitness, exhaustive lattice search
for small instances, and the anytime check on g_best curves.
"""
import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from cdcop.instance import CdcopInstance, global_cost
from cdcop.instance_file import load_instance
from errors import TooLarge
from tools.base import SchemaTool

logger = logging.getLogger(__name__)


def centralized_fitness(inst: CdcopInstance, full_assignment) -> float:
    """Internal (minimisation) cost of a complete assignment, computed in one place."""
    return global_cost(inst, full_assignment)


class GridSearchSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    points_per_dim: int = Field(21, ge=2)
    max_dims: int = Field(8, ge=1)
    max_points: int = Field(10_000_000, ge=1, le=10_000_000)
    chunk_size: int = Field(100_000, ge=1)


def grid_optimum(inst: CdcopInstance, spec: GridSearchSpec = GridSearchSpec()):
    """Best lattice point of an evenly spaced grid over every domain.

    Returns (assignment, cost) with cost in the instance's own sign. Ties go to
    the lexicographically smallest assignment.
    """
    m = inst.num_agents
    points = spec.points_per_dim
    if m > spec.max_dims:
        raise TooLarge(f"{m} agents exceed the grid search limit of {spec.max_dims}")
    total = points**m
    if total > spec.max_points:
        raise TooLarge(f"{points}^{m} = {total} lattice points exceed {spec.max_points}")

    axes = [np.linspace(d.lb, d.ub, points) for d in inst.domains]
    shape = (points,) * m
    best_cost = np.inf
    best_assignment = None
    for start in range(0, total, spec.chunk_size):
        flat = np.arange(start, min(start + spec.chunk_size, total))
        index = np.unravel_index(flat, shape)
        values = np.column_stack([axes[a][index[a]] for a in range(m)])
        costs = global_cost(inst, values)
        k = int(np.argmin(costs))
        if costs[k] < best_cost:
            best_cost = float(costs[k])
            best_assignment = tuple(float(v) for v in values[k])

    logger.info("Grid search over %d points: best cost %.6g", total, inst.to_reported(best_cost))
    return best_assignment, inst.to_reported(best_cost)


def check_anytime(trace, maximize: Optional[bool] = None) -> Optional[int]:
    """None when g_best never gets worse, else the index of the first cycle that does.

    `trace` is a RunTrace or a sequence of costs; `maximize` says which way a
    plain sequence improves (default: minimisation).
    """
    if hasattr(trace, "internal_costs"):
        costs = trace.internal_costs
    else:
        costs = list(trace)
        if maximize:
            costs = [-c for c in costs]
    for cycle in range(1, len(costs)):
        if costs[cycle] > costs[cycle - 1]:
            return cycle
    return None


class OracleToolSchema(BaseModel):
    """Input for OracleTool."""

    instance_path: str = Field(..., description="Path to the instance file")
    grid: GridSearchSpec = GridSearchSpec()


class OracleTool(SchemaTool):
    name = "Oracle Tool"
    description = "Finds the best lattice assignment of a small instance by exhaustive search."
    args_schema = OracleToolSchema

    def _run(self, args):
        inst = load_instance(Path(args.instance_path))
        assignment, cost = grid_optimum(inst, args.grid)
        return {
            "instance": args.instance_path,
            "objective": inst.objective.value,
            "points_per_dim": args.grid.points_per_dim,
            "assignment": list(assignment),
            "cost": cost,
        }


def fitness_gap(inst: CdcopInstance, positions: np.ndarray, fitness: Sequence[float]):
    """Largest relative gap between root-computed fitness and centralized_fitness."""
    expected = centralized_fitness(inst, positions)
    fitness = np.asarray(fitness, dtype=float)
    scale = np.maximum(np.abs(expected), 1.0)
    return float(np.max(np.abs(fitness - expected) / scale))
