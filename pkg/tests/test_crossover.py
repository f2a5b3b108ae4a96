import numpy as np
import pytest

from cdcop.instance import Domain
from errors import DegenerateWeights
from solvers.crossover import crossover, crossover_probabilities, select_pair
from solvers.swarm import initialization


def make_swarm(x, v, local_fitness):
    swarm = initialization(Domain(-10.0, 10.0), len(x), np.random.default_rng(0))
    swarm.x = np.array(x, dtype=float)
    swarm.v = np.array(v, dtype=float)
    swarm.local_fitness = np.array(local_fitness, dtype=float)
    return swarm


def test_all_zero_weights_are_degenerate():
    with pytest.raises(DegenerateWeights):
        crossover_probabilities(np.zeros(4))


def test_pair_is_distinct():
    rng = np.random.default_rng(1)
    weights = crossover_probabilities(np.array([-1.44, 14.0, -9.0, 6.64]))
    for _ in range(200):
        a, b = select_pair(weights, rng)
        assert a != b


def test_single_weighted_particle_falls_back_to_uniform():
    rng = np.random.default_rng(2)
    a, b = select_pair(np.array([0.0, 1.0, 0.0]), rng)
    assert a != b


def test_weighted_selection_prefers_heavy_particles():
    rng = np.random.default_rng(3)
    weights = np.array([0.001, 0.001, 0.499, 0.499])
    picks = [set(select_pair(weights, rng)) for _ in range(200)]
    assert sum(p == {2, 3} for p in picks) > 150


def test_crossover_stays_between_parents():
    rng = np.random.default_rng(4)
    for _ in range(50):
        x = rng.uniform(-10, 10, 6)
        swarm = make_swarm(x, rng.normal(size=6), rng.normal(size=6))
        result = crossover(swarm, rng)
        a, b = result.pair
        low, high = sorted((x[a], x[b]))
        assert low - 1e-12 <= swarm.x[a] <= high + 1e-12
        assert low - 1e-12 <= swarm.x[b] <= high + 1e-12
        untouched = [k for k in range(6) if k not in result.pair]
        np.testing.assert_array_equal(swarm.x[untouched], x[untouched])


def test_crossover_with_zero_fitness_uses_uniform_weights():
    swarm = make_swarm([1.0, 2.0, 3.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0])
    result = crossover(swarm, np.random.default_rng(5))
    np.testing.assert_allclose(swarm.b_p, [1 / 3] * 3)
    assert not result.velocities_crossed


def test_velocities_crossed_when_they_do_not_cancel():
    swarm = make_swarm([1.0, 2.0], [2.0, -1.0], [1.0, 1.0])
    result = crossover(swarm, np.random.default_rng(6))
    assert result.velocities_crossed
    assert sorted(swarm.v) == [1.0, 2.0]
