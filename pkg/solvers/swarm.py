"""
Local Swarm
===========

One agent's slice of the population and the guaranteed-convergence control
state. Every array has one entry per particle; index k is the same particle
on every agent.
"""
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from cdcop.instance import Domain
from runtime.messages import BestPayload

# Lower bound for rho under repeated halving.
RHO_FLOOR = float(np.finfo(float).tiny)


@dataclass
class LocalSwarm:
    x: np.ndarray
    v: np.ndarray
    local_fitness: np.ndarray
    fitness: np.ndarray
    p_best_x: np.ndarray
    # Authoritative only at the root; other agents keep +inf.
    p_best_fitness: np.ndarray
    g_best_x: float = math.nan
    g_best_fitness: float = math.inf
    b_p: np.ndarray = field(default=None)

    @property
    def num_particles(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class GcpsoControl:
    t: int = 0
    s_c: int = 0
    f_c: int = 0
    rho: float = 1.0
    best_particle: Optional[int] = None


def initialization(domain: Domain, num_particles: int, rng: np.random.Generator) -> LocalSwarm:
    """Random positions in the domain, zero velocities, no bests yet."""
    k = num_particles
    return LocalSwarm(
        x=rng.uniform(domain.lb, domain.ub, size=k),
        v=np.zeros(k),
        local_fitness=np.zeros(k),
        fitness=np.zeros(k),
        p_best_x=np.full(k, math.nan),
        p_best_fitness=np.full(k, math.inf),
        b_p=np.full(k, 1.0 / k),
    )


def root_best_update(swarm: LocalSwarm) -> BestPayload:
    """Strict-< comparison of this cycle's fitness against p_best and g_best."""
    improved = swarm.fitness < swarm.p_best_fitness
    swarm.p_best_fitness[improved] = swarm.fitness[improved]
    swarm.p_best_x[improved] = swarm.x[improved]

    best_particle = None
    best_fitness = None
    k = int(np.argmin(swarm.fitness))
    if swarm.fitness[k] < swarm.g_best_fitness:
        best_particle = k
        best_fitness = float(swarm.fitness[k])
        swarm.g_best_fitness = best_fitness
        swarm.g_best_x = float(swarm.x[k])

    return BestPayload(
        improved_particles=tuple(int(i) for i in np.flatnonzero(improved)),
        best_particle=best_particle,
        best_fitness=best_fitness,
    )


def apply_best(swarm: LocalSwarm, best: BestPayload) -> None:
    """Snapshot own coordinates for the improved particles and the new P*."""
    if best.improved_particles:
        improved = list(best.improved_particles)
        swarm.p_best_x[improved] = swarm.x[improved]
    if best.improved:
        swarm.g_best_x = float(swarm.x[best.best_particle])
        swarm.g_best_fitness = best.best_fitness


def update_control(ctrl: GcpsoControl, improved: bool, config, best_particle=None) -> GcpsoControl:
    """Advance t, resize rho from last cycle's streaks, then update the streaks.

    P* stays on the particle that last improved g_best.
    """
    rho = ctrl.rho
    if ctrl.s_c > config.max_sc:
        rho = 2.0 * rho
    elif ctrl.f_c > config.max_fc:
        rho = max(0.5 * rho, RHO_FLOOR)

    if improved:
        s_c, f_c = ctrl.s_c + 1, 0
    else:
        s_c, f_c = 0, ctrl.f_c + 1

    return replace(
        ctrl,
        t=ctrl.t + 1,
        s_c=s_c,
        f_c=f_c,
        rho=rho,
        best_particle=best_particle if improved else ctrl.best_particle,
    )


def move_particles(
    swarm: LocalSwarm,
    domain: Domain,
    ctrl: GcpsoControl,
    w: float,
    c1: float,
    c2: float,
    r1: float,
    r2: float,
    constricted: bool = False,
    skip=(),
) -> None:
    """Velocity and position update for every particle not in `skip`."""
    x, v = swarm.x, swarm.v
    cognitive = r1 * c1 * (swarm.p_best_x - x)
    social = r2 * c2 * (swarm.g_best_x - x)
    if constricted:
        new_v = w * (v + cognitive + social)
    else:
        new_v = w * v + cognitive + social

    p_star = ctrl.best_particle
    if p_star is not None:
        new_v[p_star] = -x[p_star] + swarm.g_best_x + w * v[p_star] + ctrl.rho * (1.0 - 2.0 * r2)

    moving = np.ones(len(x), dtype=bool)
    moving[np.asarray(skip, dtype=int)] = False
    v[moving] = new_v[moving]
    x[moving] = np.clip(x[moving] + v[moving], domain.lb, domain.ub)


def variable_update(swarm, domain, ctrl, config, schedule, rng, skip=()):
    """Draw this cycle's (r1, r2) for the agent and move its particles."""
    r1, r2 = rng.random(2)
    w = schedule.weight(ctrl.t, config.t_max)
    move_particles(
        swarm, domain, ctrl, w, config.c1, config.c2, r1, r2,
        constricted=schedule.constricted, skip=skip,
    )
    return r1, r2
