"""
PCD Agent
=========

One agent of the swarm: owns its variable's slice of every particle and
talks to the rest of the swarm only through the runtime's messages.
"""
import logging
from dataclasses import dataclass

import numpy as np

from errors import MissingMessage
from runtime.messages import BestPayload
from solvers.crossover import crossover
from solvers.swarm import (
    GcpsoControl,
    apply_best,
    initialization,
    root_best_update,
    update_control,
    variable_update,
)

logger = logging.getLogger(__name__)

INIT_STREAM, MOTION_STREAM, CROSSOVER_STREAM = range(3)


@dataclass
class AgentStreams:
    """Disjoint random streams, so enabling crossover leaves the others untouched."""

    init: np.random.Generator
    motion: np.random.Generator
    crossover: np.random.Generator

    @classmethod
    def for_agent(cls, seed: int, agent_id: int) -> "AgentStreams":
        def stream(label):
            return np.random.default_rng(
                np.random.SeedSequence(entropy=seed, spawn_key=(agent_id, label))
            )

        return cls(stream(INIT_STREAM), stream(MOTION_STREAM), stream(CROSSOVER_STREAM))


class PcdAgent:
    def __init__(self, agent_id, inst, tree, config, streams=None):
        self.id = agent_id
        self.config = config
        self.schedule = config.schedule()
        self.domain = inst.domains[agent_id]
        self.neighbors = tree.neighbors[agent_id]
        self.children = tree.children[agent_id]
        self.parent = tree.parent[agent_id]
        self.is_root = tree.is_root(agent_id)
        self.streams = streams or AgentStreams.for_agent(config.seed, agent_id)

        # (neighbour, internal expression, slot this agent's variable fills)
        self._terms = []
        for f in inst.functions:
            if agent_id in f.scope:
                i, j = f.scope
                other = j if i == agent_id else i
                self._terms.append((other, inst.internal_exprs[f.id], 0 if i == agent_id else 1))
        self._terms.sort(key=lambda term: term[0])

        self.swarm = initialization(self.domain, config.num_particles, self.streams.init)
        self.control = GcpsoControl()
        self.last_best = None
        self.last_crossover = None

    def value_payload(self) -> np.ndarray:
        return self.swarm.x.copy()

    def evaluate(self, values, costs):
        """Local fitness from neighbour positions, plus the children's subtree fitness."""
        missing = [n for n in self.neighbors if n not in values]
        missing += [c for c in self.children if c not in costs]
        if missing:
            raise MissingMessage(f"agent {self.id} evaluated without messages from {missing}")

        x = self.swarm.x
        local = np.zeros(self.swarm.num_particles)
        for neighbor, expr, own_slot in self._terms:
            other = values[neighbor]
            local = local + (expr.evaluate(x, other) if own_slot == 0 else expr.evaluate(other, x))
        fitness = local.copy()
        for child in self.children:
            fitness = fitness + costs[child]

        self.swarm.local_fitness = local
        if self.is_root:
            self.swarm.fitness = fitness / 2.0
            return None
        self.swarm.fitness = fitness
        return fitness.copy()

    def best_update(self, best) -> BestPayload:
        if self.is_root:
            best = root_best_update(self.swarm)
        else:
            apply_best(self.swarm, best)
        self.last_best = best
        return best

    def finish_cycle(self):
        best = self.last_best
        self.control = update_control(self.control, best.improved, self.config, best.best_particle)

        skip = ()
        if self.config.crossover:
            self.last_crossover = crossover(self.swarm, self.streams.crossover)
            if self.last_crossover.velocities_crossed:
                skip = self.last_crossover.pair

        variable_update(
            self.swarm, self.domain, self.control, self.config, self.schedule,
            self.streams.motion, skip=skip,
        )
