"""
Shared fixtures: the four-agent worked example and small hand-built instances.
"""
import sys
from pathlib import Path

import numpy as np
import pytest

# Add the project directory to the Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from cdcop.expression import parse_expression  # noqa: E402
from cdcop.instance import CdcopInstance, CostFunction, Domain  # noqa: E402
from cdcop.instance_file import example_instance as build_example  # noqa: E402


@pytest.fixture
def example():
    return build_example()


@pytest.fixture
def example_positions():
    """Rows are particles P1..P4, columns are agents 0..3."""
    return np.array([
        [-1.0, 1.2, -2.0, 2.0],
        [-2.0, 2.0, -1.0, 1.0],
        [0.0, 1.0, 2.0, -2.0],
        [1.1, -1.0, 1.5, 0.5],
    ])


def make_instance(num_agents, edges, domain=(-10.0, 10.0), objective="min"):
    """Instance from (scope, expression text) pairs, ids in order."""
    return CdcopInstance(
        num_agents,
        (Domain(*domain),) * num_agents,
        [CostFunction(i, scope, parse_expression(text)) for i, (scope, text) in enumerate(edges)],
        objective,
    )


@pytest.fixture
def convex():
    """f(x, y) = x^2 + y^2 on [-50, 50]^2."""
    return make_instance(2, [((0, 1), "(+ (^ x0 2) (^ x1 2))")], domain=(-50.0, 50.0))


@pytest.fixture
def path3():
    return make_instance(3, [
        ((0, 1), "(+ (^ x0 2) (* x0 x1))"),
        ((1, 2), "(- (^ x1 2) (* 3 x0))"),
    ])
