import numpy as np
import pytest

from errors import DeadlockDetected, ProtocolError
from runtime.messages import BestPayload, MessageKind
from runtime.pseudo_tree import build_bfs
from runtime.simulator import (
    MessageLog,
    SynchronousRuntime,
    expected_counts,
    message_stats,
    payload_bound,
    run_cycle,
)


class RecordingAgents:
    """Callbacks that send K-vectors of ones and log the order agents act in."""

    def __init__(self, tree, k=3):
        self.tree = tree
        self.k = k
        self.calls = []

    def value_payload(self, agent):
        return np.full(self.k, float(agent))

    def evaluate(self, agent, values, costs):
        self.calls.append(("evaluate", agent, sorted(values), sorted(costs)))
        if self.tree.is_root(agent):
            return None
        return np.ones(self.k)

    def best_update(self, agent, best):
        self.calls.append(("best", agent, best))
        if best is None:
            return BestPayload(improved_particles=(0, 2), best_particle=2, best_fitness=-1.0)
        return best

    def finish_cycle(self, agent):
        self.calls.append(("finish", agent))


def test_example_cycle_counts(example):
    tree = build_bfs(example, 0)
    stats = run_cycle(example.agents, tree, RecordingAgents(tree))
    assert (stats.value_messages, stats.cost_messages, stats.best_messages) == (8, 3, 3)
    assert stats.hops == 3
    assert expected_counts(tree) == {"value": 8, "cost": 3, "best": 3}


def test_phase_order(example):
    tree = build_bfs(example, 0)
    agents = RecordingAgents(tree)
    run_cycle(example.agents, tree, agents)
    order = [(kind, agent) for kind, agent, *_ in agents.calls]
    assert order[:4] == [("evaluate", 1), ("evaluate", 2), ("evaluate", 3), ("evaluate", 0)]
    assert order[4:8] == [("best", 0), ("best", 1), ("best", 2), ("best", 3)]
    assert order[8:] == [("finish", a) for a in range(4)]
    # The root sees every neighbour's VALUE and every child's COST
    assert agents.calls[3] == ("evaluate", 0, [1, 2, 3], [1, 2, 3])
    assert agents.calls[2] == ("evaluate", 3, [0, 2], [])


def test_best_is_broadcast_unchanged(path3):
    tree = build_bfs(path3, 0)
    agents = RecordingAgents(tree)
    run_cycle(path3.agents, tree, agents)
    received = [best for kind, agent, *rest in agents.calls if kind == "best" for best in rest]
    assert received[0] is None
    assert received[1] == received[2] == BestPayload((0, 2), 2, -1.0)


def test_payload_sizes_respect_bound(example):
    tree = build_bfs(example, 0)
    runtime = SynchronousRuntime(tree)
    k = 3
    for _ in range(3):
        runtime.run_cycle(example.agents, RecordingAgents(tree, k))
    summary = message_stats(runtime.history, tree, k)
    assert summary.ok
    assert summary.cycles == 3
    # Root: 3 VALUE messages of K scalars, 3 BEST messages of |PB| + 2 scalars
    assert summary.max_cycle_scalars[0] == 3 * k + 3 * 4
    assert summary.max_cycle_scalars[0] <= payload_bound(k, 3, 3)
    assert summary.messages_per_agent[0] == 3 * 6


def test_message_log(example, tmp_path):
    tree = build_bfs(example, 0)
    log = MessageLog()
    runtime = SynchronousRuntime(tree, log)
    runtime.run_cycle(example.agents, RecordingAgents(tree))
    frame = log.to_frame()
    assert list(frame.columns) == ["cycle", "kind", "from", "to", "payload_len"]
    assert (frame["kind"] == MessageKind.VALUE.value).sum() == 8
    log.write_csv(tmp_path / "messages.csv")
    assert (tmp_path / "messages.csv").exists()


def test_missing_cost_is_a_protocol_error(example):
    tree = build_bfs(example, 0)

    class SilentChild(RecordingAgents):
        def evaluate(self, agent, values, costs):
            super().evaluate(agent, values, costs)
            return None

    with pytest.raises(ProtocolError):
        run_cycle(example.agents, tree, SilentChild(tree))


def test_waiting_for_unsent_message_deadlocks(example):
    tree = build_bfs(example, 0)
    runtime = SynchronousRuntime(tree)
    with pytest.raises(DeadlockDetected):
        runtime._receive(0, MessageKind.COST, (1,))


def test_cycle_needs_every_agent(example):
    tree = build_bfs(example, 0)
    with pytest.raises(ProtocolError):
        run_cycle([0, 1], tree, RecordingAgents(tree))


def test_size_violation_is_reported(example):
    tree = build_bfs(example, 0)
    runtime = SynchronousRuntime(tree)
    runtime.run_cycle(example.agents, RecordingAgents(tree, k=10))
    summary = message_stats(runtime.history, tree, num_particles=2)
    assert not summary.ok
    assert {v["type"] for v in summary.violations} == {"message size"}
