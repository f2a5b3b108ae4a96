"""
PCD Solver
==========

Drives the agents through synchronous cycles:
EVALUATION -> BEST_UPDATE -> [CROSSOVER] -> control update -> VARIABLE_UPDATE.

The root's g_best fitness after each cycle is the anytime solution quality.
"""
import logging

import numpy as np

from cdcop.instance import CdcopInstance
from runtime.pseudo_tree import PseudoTree
from runtime.simulator import SynchronousRuntime
from solvers.agent import PcdAgent
from solvers.config import SwarmConfig
from solvers.trace import CycleRecord, RunTrace

logger = logging.getLogger(__name__)


class PcdSolver:
    """Implements the runtime's cycle callbacks by dispatching to the agents."""

    def __init__(self, inst: CdcopInstance, tree: PseudoTree, config: SwarmConfig, message_log=None):
        self.inst = inst
        self.tree = tree
        self.config = config
        self.agents = {a: PcdAgent(a, inst, tree, config) for a in inst.agents}
        self.runtime = SynchronousRuntime(tree, message_log)
        self.trace = RunTrace(maximize=inst.maximize)
        self._hops = 0
        self._elapsed_ms = 0.0

    @property
    def root(self) -> PcdAgent:
        return self.agents[self.tree.root]

    def positions(self) -> np.ndarray:
        """Current (K, m) particle positions, column i held by agent i."""
        return np.column_stack([self.agents[a].swarm.x for a in self.inst.agents])

    # Runtime callbacks

    def value_payload(self, agent):
        return self.agents[agent].value_payload()

    def evaluate(self, agent, values, costs):
        return self.agents[agent].evaluate(values, costs)

    def best_update(self, agent, best):
        return self.agents[agent].best_update(best)

    def finish_cycle(self, agent):
        self.agents[agent].finish_cycle()

    # Driving

    def step(self) -> CycleRecord:
        stats = self.runtime.run_cycle(self.agents.keys(), self)
        self._hops += stats.hops
        self._elapsed_ms += stats.duration_s * 1000.0

        internal = self.root.swarm.g_best_fitness
        record = CycleRecord(
            cycle=stats.cycle,
            g_best_internal=internal,
            g_best_cost=self.inst.to_reported(internal),
            assignment=tuple(self.agents[a].swarm.g_best_x for a in self.inst.agents),
            stats=stats,
            hops=self._hops,
            elapsed_ms=self._elapsed_ms,
        )
        self.trace.records.append(record)
        logger.debug("cycle %d: g_best %.6g", record.cycle, record.g_best_cost)
        return record

    def run(self) -> RunTrace:
        logger.info(
            "Solving %d agents, K=%d, t_max=%d, crossover=%s, seed=%d",
            self.inst.num_agents, self.config.num_particles, self.config.t_max,
            self.config.crossover, self.config.seed,
        )
        for _ in range(self.config.t_max - self.runtime.cycle):
            self.step()
        logger.info("Finished after %d cycles: best cost %.6g", self.runtime.cycle, self.trace.final_cost)
        return self.trace


def solve(inst: CdcopInstance, tree: PseudoTree, config: SwarmConfig, message_log=None) -> RunTrace:
    return PcdSolver(inst, tree, config, message_log).run()
