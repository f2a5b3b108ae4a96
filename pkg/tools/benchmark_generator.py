"""
Benchmark Generator Tool
========================

Seeded generators for the four benchmark families:

- erdos_renyi: G(n, p) random graphs, regenerated until connected
- random_tree: uniform random attachment trees
- barabasi_albert: scale-free graphs grown from an m-clique
- sensor_grid: signal-strength maximisation between 4-neighbour grid cells

The first three carry quadratic costs a*x^2 + b*x*y + c*y^2 with a, b, c
drawn uniformly from the coefficient range.
"""
import logging
from pathlib import Path
from typing import Literal, Optional, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from cdcop.expression import Add, Constant, Div, Mul, Pow, Sub, Var, quadratic
from cdcop.instance import CdcopInstance, CostFunction, Domain, Objective
from cdcop.instance_file import dump_instance
from errors import ConfigError, GenerationFailed
from settings import load_benchmarks
from tools.base import SchemaTool

logger = logging.getLogger(__name__)

DEFAULT_DOMAINS = {
    "erdos_renyi": (-50.0, 50.0),
    "random_tree": (-50.0, 50.0),
    "barabasi_albert": (-20.0, 20.0),
    "sensor_grid": (0.0, 10.0),
}
FAMILIES = tuple(DEFAULT_DOMAINS)
ER_RETRIES = 100

SIGNAL_CONSTANT = 10000.0
CELL_SIZE = 10.0
NOISE_RANGE = (1.0, 10.0)
# Keeps d^2 >= 1 when two sensors touch at a shared cell border.
SENSOR_SEPARATION = 1.0


class BenchSpec(BaseModel):
    """Input for BenchmarkGeneratorTool."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: Literal["erdos_renyi", "random_tree", "barabasi_albert", "sensor_grid"]
    n: Optional[int] = Field(None, ge=2, description="Number of agents")
    p: Optional[float] = Field(None, gt=0, le=1, description="Edge probability (erdos_renyi)")
    m: Optional[int] = Field(None, ge=1, description="Attachments per new agent (barabasi_albert)")
    rows: Optional[int] = Field(None, ge=2)
    cols: Optional[int] = Field(None, ge=2)
    domain: Optional[Tuple[float, float]] = Field(None, description="Defaults to the family preset")
    coeff_range: Tuple[float, float] = (-5.0, 5.0)
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _check_family_fields(self):
        required = {
            "erdos_renyi": ("n", "p"),
            "random_tree": ("n",),
            "barabasi_albert": ("n", "m"),
            "sensor_grid": ("rows", "cols"),
        }[self.family]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.family} needs {missing}")
        if self.family == "barabasi_albert" and not self.n > self.m:
            raise ValueError(f"barabasi_albert needs n > m, got n={self.n}, m={self.m}")
        if self.domain is not None and not self.domain[0] < self.domain[1]:
            raise ValueError(f"empty domain {self.domain}")
        if not self.coeff_range[0] <= self.coeff_range[1]:
            raise ValueError(f"empty coefficient range {self.coeff_range}")
        return self

    @classmethod
    def from_preset(cls, family: str, **overrides) -> "BenchSpec":
        """Spec from the family's block in benchmarks.yaml, with overrides applied."""
        presets = load_benchmarks()
        if family not in presets:
            raise ConfigError(f"unknown benchmark family {family!r}; known: {sorted(presets)}")
        values = {k: v for k, v in presets[family].items() if k != "description"}
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(family=family, **values)
        except ValidationError as e:
            raise ConfigError(f"invalid {family} spec: {e}") from e


def _quadratic_instance(graph: nx.Graph, domain, coeff_range, rng) -> CdcopInstance:
    lo, hi = coeff_range
    functions = []
    for fn_id, (i, j) in enumerate(sorted(tuple(sorted(e)) for e in graph.edges)):
        a, b, c = rng.uniform(lo, hi, size=3)
        functions.append(CostFunction(fn_id, (i, j), quadratic(float(a), float(b), float(c))))
    n = graph.number_of_nodes()
    return CdcopInstance(n, (Domain(*map(float, domain)),) * n, functions, Objective.MIN)


def gen_erdos_renyi(n, p, domain=(-50.0, 50.0), coeff_range=(-5.0, 5.0), seed=0) -> CdcopInstance:
    rng = np.random.default_rng(seed)
    for attempt in range(ER_RETRIES):
        graph = nx.gnp_random_graph(n, p, seed=int(rng.integers(2**32)))
        if nx.is_connected(graph):
            logger.debug("G(%d, %.3g) connected after %d attempts", n, p, attempt + 1)
            return _quadratic_instance(graph, domain, coeff_range, rng)
    raise GenerationFailed(
        f"G({n}, {p}) stayed disconnected after {ER_RETRIES} attempts; p is too small for n"
    )


def gen_random_tree(n, domain=(-50.0, 50.0), coeff_range=(-5.0, 5.0), seed=0) -> CdcopInstance:
    rng = np.random.default_rng(seed)
    graph = nx.empty_graph(n)
    for node in range(1, n):
        graph.add_edge(int(rng.integers(node)), node)
    return _quadratic_instance(graph, domain, coeff_range, rng)


def gen_barabasi_albert(n, m, domain=(-20.0, 20.0), coeff_range=(-5.0, 5.0), seed=0) -> CdcopInstance:
    if not n > m:
        raise ConfigError(f"barabasi_albert needs n > m, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    # A single node has nothing to attach to, so m = 1 grows from one edge.
    clique = nx.complete_graph(max(m, 2))
    graph = nx.barabasi_albert_graph(n, m, seed=int(rng.integers(2**32)), initial_graph=clique)
    return _quadratic_instance(graph, domain, coeff_range, rng)


def sensor_expression(cell_i, cell_j, rx_i, rx_j, eta) -> Div:
    """C / (d^2 * lambda) for sensors at grid cells (row, col), x0 and x1 their offsets."""
    (ri, ci), (rj, cj) = cell_i, cell_j
    dx = CELL_SIZE * (ci - cj)
    dy = CELL_SIZE * (ri - rj)
    d2 = Add(
        Add(Pow(Add(Sub(Var(0), Var(1)), Constant(dx)), 2), Constant(dy * dy)),
        Constant(SENSOR_SEPARATION),
    )
    lam = Add(
        Add(Pow(Sub(Constant(rx_i), Var(0)), 2), Pow(Sub(Constant(rx_j), Var(1)), 2)),
        Constant(eta),
    )
    return Div(Constant(SIGNAL_CONSTANT), Mul(d2, lam))


def gen_sensor_grid(rows, cols, domain=(0.0, CELL_SIZE), seed=0) -> CdcopInstance:
    rng = np.random.default_rng(seed)
    graph = nx.grid_2d_graph(rows, cols)

    def agent(cell):
        return cell[0] * cols + cell[1]

    edges = sorted(
        (tuple(sorted(e, key=agent)) for e in graph.edges),
        key=lambda e: (agent(e[0]), agent(e[1])),
    )
    functions = []
    for fn_id, (cell_i, cell_j) in enumerate(edges):
        rx_i, rx_j = rng.uniform(0.0, CELL_SIZE, size=2)
        eta = rng.uniform(*NOISE_RANGE)
        expr = sensor_expression(cell_i, cell_j, float(rx_i), float(rx_j), float(eta))
        functions.append(CostFunction(fn_id, (agent(cell_i), agent(cell_j)), expr))

    n = rows * cols
    return CdcopInstance(n, (Domain(*map(float, domain)),) * n, functions, Objective.MAX)


def generate(spec: BenchSpec) -> CdcopInstance:
    domain = spec.domain or DEFAULT_DOMAINS[spec.family]
    if spec.family == "erdos_renyi":
        inst = gen_erdos_renyi(spec.n, spec.p, domain, spec.coeff_range, spec.seed)
    elif spec.family == "random_tree":
        inst = gen_random_tree(spec.n, domain, spec.coeff_range, spec.seed)
    elif spec.family == "barabasi_albert":
        inst = gen_barabasi_albert(spec.n, spec.m, domain, spec.coeff_range, spec.seed)
    else:
        inst = gen_sensor_grid(spec.rows, spec.cols, domain, spec.seed)
    logger.info(
        "Generated %s instance: %d agents, %d edges (seed %d)",
        spec.family, inst.num_agents, inst.num_edges, spec.seed,
    )
    return inst


class BenchmarkGeneratorToolSchema(BaseModel):
    """Input for BenchmarkGeneratorTool."""

    spec: BenchSpec
    output_path: Optional[str] = Field(None, description="Where to write the instance JSON")


class BenchmarkGeneratorTool(SchemaTool):
    name = "Benchmark Generator Tool"
    description = "Generates seeded benchmark instances and writes them as instance files."
    args_schema = BenchmarkGeneratorToolSchema

    def _run(self, args):
        inst = generate(args.spec)
        result = {
            "family": args.spec.family,
            "num_agents": inst.num_agents,
            "num_edges": inst.num_edges,
            "objective": inst.objective.value,
            "path": None,
        }
        if args.output_path:
            result["path"] = str(dump_instance(inst, Path(args.output_path)))
        return result
