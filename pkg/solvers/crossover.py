"""
Crossover
=========

Local arithmetic crossover: each agent blends two of its own particles.
Particles are picked with probability proportional to |local fitness|.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from errors import DegenerateWeights

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CrossoverResult:
    pair: Tuple[int, int]
    r: float
    velocities_crossed: bool


def crossover_probabilities(local_fitness: np.ndarray) -> np.ndarray:
    weights = np.abs(local_fitness)
    total = weights.sum()
    if total == 0 or not np.isfinite(total):
        raise DegenerateWeights(f"cannot normalise |local fitness| summing to {total}")
    return weights / total


def select_pair(b_p: np.ndarray, rng: np.random.Generator) -> Tuple[int, int]:
    """Two distinct particles, weighted sampling without replacement."""
    k = len(b_p)
    if np.count_nonzero(b_p) < 2:
        logger.debug("fewer than two weighted particles, picking uniformly")
        a, b = rng.choice(k, size=2, replace=False)
    else:
        a, b = rng.choice(k, size=2, replace=False, p=b_p)
    return int(a), int(b)


def arithmetic_crossover(x_a, x_b, v_a, v_b, r):
    """Blend two positions; cross velocities unless they cancel out.

    Returns (x_a', x_b', v_a', v_b', velocities_crossed).
    """
    new_x_a = r * x_a + (1.0 - r) * x_b
    new_x_b = r * x_b + (1.0 - r) * x_a
    total = v_a + v_b
    if abs(total) == 0:
        return new_x_a, new_x_b, v_a, v_b, False
    direction = total / abs(total)
    return new_x_a, new_x_b, direction * abs(v_a), direction * abs(v_b), True


def crossover(swarm, rng: np.random.Generator) -> CrossoverResult:
    """Apply one crossover to `swarm` in place using this cycle's local fitness."""
    try:
        swarm.b_p = crossover_probabilities(swarm.local_fitness)
    except DegenerateWeights as e:
        logger.debug("%s, falling back to uniform selection", e)
        swarm.b_p = np.full(swarm.num_particles, 1.0 / swarm.num_particles)

    a, b = select_pair(swarm.b_p, rng)
    r = float(rng.random())
    x_a, x_b, v_a, v_b, crossed = arithmetic_crossover(
        swarm.x[a], swarm.x[b], swarm.v[a], swarm.v[b], r
    )
    swarm.x[a], swarm.x[b] = x_a, x_b
    swarm.v[a], swarm.v[b] = v_a, v_b
    return CrossoverResult(pair=(a, b), r=r, velocities_crossed=crossed)
