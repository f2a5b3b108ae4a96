"""
C-DCOP Instances
================

Agents, continuous domains and binary cost functions, plus the centralized
cost of full assignments.

Each agent controls exactly one variable, so agent ids and variable ids are
the same dense range 0..m-1. Maximisation instances keep their functions as
written but evaluate the negated tree: the solvers always minimise.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Sequence, Tuple

import networkx as nx
import numpy as np

from cdcop.expression import Expression, Neg, eval_expr, parse_expression


class Objective(str, Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class Domain:
    lb: float
    ub: float

    def contains(self, value) -> bool:
        return bool(np.all((self.lb <= value) & (value <= self.ub)))


@dataclass(frozen=True)
class CostFunction:
    id: int
    scope: Tuple[int, int]
    expr: Expression

    @classmethod
    def from_text(cls, fn_id, scope, text):
        return cls(int(fn_id), (int(scope[0]), int(scope[1])), parse_expression(text))


@dataclass(frozen=True)
class CdcopInstance:
    num_agents: int
    domains: Tuple[Domain, ...]
    functions: Tuple[CostFunction, ...]
    objective: Objective = Objective.MIN
    _by_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "domains", tuple(self.domains))
        object.__setattr__(self, "functions", tuple(self.functions))
        object.__setattr__(self, "objective", Objective(self.objective))
        object.__setattr__(self, "_by_id", {f.id: f for f in self.functions})

    @property
    def agents(self) -> range:
        return range(self.num_agents)

    @property
    def maximize(self) -> bool:
        return self.objective is Objective.MAX

    def function(self, fn_id) -> CostFunction:
        return self._by_id[fn_id]

    @cached_property
    def internal_exprs(self) -> dict:
        """Per function id, the tree the solvers minimise (negated for max)."""
        if self.maximize:
            return {f.id: Neg(f.expr) for f in self.functions}
        return {f.id: f.expr for f in self.functions}

    @cached_property
    def graph(self) -> nx.Graph:
        """Constraint graph: one node per agent, one edge per function."""
        graph = nx.Graph()
        graph.add_nodes_from(self.agents)
        for f in self.functions:
            graph.add_edge(*f.scope, fn_id=f.id)
        return graph

    def neighbors(self, agent) -> Tuple[int, ...]:
        return tuple(sorted(self.graph.neighbors(agent)))

    @property
    def num_edges(self) -> int:
        return len(self.functions)

    def to_reported(self, cost):
        """Convert an internal (minimisation) cost back to the file's sign."""
        return -cost if self.maximize else cost

    def lower_bounds(self) -> np.ndarray:
        return np.array([d.lb for d in self.domains], dtype=float)

    def upper_bounds(self) -> np.ndarray:
        return np.array([d.ub for d in self.domains], dtype=float)


Assignment = Sequence[float]


def constraint_cost(inst: CdcopInstance, fn_id, asg) -> float:
    """Internal cost of one function under a full assignment.

    `asg` may also be a (K, m) array of K assignments; the result is then a
    length-K vector.
    """
    values = np.asarray(asg, dtype=float)
    i, j = inst.function(fn_id).scope
    return eval_expr(inst.internal_exprs[fn_id], values[..., i], values[..., j])


def global_cost(inst: CdcopInstance, asg):
    """Sum of all internal function costs."""
    values = np.asarray(asg, dtype=float)
    total = np.zeros(values.shape[:-1]) if values.ndim > 1 else 0.0
    for f in inst.functions:
        total = total + constraint_cost(inst, f.id, values)
    return total


def incident_functions(inst: CdcopInstance, agent) -> Tuple[int, ...]:
    return tuple(sorted(f.id for f in inst.functions if agent in f.scope))


def check_assignment(inst: CdcopInstance, asg) -> list:
    """Issues for an assignment that is incomplete or leaves its domains."""
    values = np.asarray(asg, dtype=float)
    if values.shape[-1:] != (inst.num_agents,):
        return [{
            "type": "incomplete assignment",
            "description": f"expected {inst.num_agents} values, got shape {values.shape}",
        }]
    issues = []
    for agent, domain in enumerate(inst.domains):
        if not domain.contains(values[..., agent]):
            issues.append({
                "type": "out of domain",
                "description": f"x{agent} outside [{domain.lb}, {domain.ub}]",
            })
    return issues


def validate_instance(inst: CdcopInstance) -> list:
    """Check every structural invariant; an empty list means the instance is valid."""
    issues = []

    if inst.num_agents < 1:
        issues.append({"type": "no agents", "description": "instance has no agents"})
    if len(inst.domains) != inst.num_agents:
        issues.append({
            "type": "domain count",
            "description": f"{len(inst.domains)} domains for {inst.num_agents} agents",
        })

    for agent, domain in enumerate(inst.domains):
        if not (math.isfinite(domain.lb) and math.isfinite(domain.ub)):
            issues.append({
                "type": "non-finite domain",
                "description": f"domain of x{agent} is [{domain.lb}, {domain.ub}]",
            })
        elif domain.lb >= domain.ub:
            issues.append({
                "type": "degenerate domain",
                "description": f"degenerate domain for x{agent}: [{domain.lb}, {domain.ub}]",
            })

    seen_ids = set()
    seen_pairs = set()
    scopes_ok = True
    for f in inst.functions:
        if f.id in seen_ids:
            issues.append({"type": "duplicate id", "description": f"function id {f.id} repeated"})
        seen_ids.add(f.id)

        i, j = f.scope
        if not (0 <= i < inst.num_agents and 0 <= j < inst.num_agents):
            issues.append({
                "type": "unknown agent",
                "description": f"function {f.id} scope {f.scope} outside 0..{inst.num_agents - 1}",
            })
            scopes_ok = False
            continue
        if i == j:
            issues.append({"type": "self-loop", "description": f"function {f.id} scopes x{i} twice"})
            scopes_ok = False
            continue
        pair = frozenset(f.scope)
        if pair in seen_pairs:
            issues.append({
                "type": "duplicate scope",
                "description": f"function {f.id} repeats the pair {sorted(pair)}",
            })
        seen_pairs.add(pair)

        if f.expr.slots() != {0, 1}:
            issues.append({
                "type": "scope mismatch",
                "description": f"function {f.id} references slots {sorted(f.expr.slots())}, expected [0, 1]",
            })

    if scopes_ok and inst.num_agents > 0 and not nx.is_connected(inst.graph):
        components = nx.number_connected_components(inst.graph)
        issues.append({
            "type": "disconnected graph",
            "description": f"disconnected graph with {components} components",
        })

    return issues
