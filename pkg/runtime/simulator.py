"""
Synchronous Runtime
===================

Runs one protocol cycle at a time over a pseudo-tree, in three barriered
phases:

1. VALUE: every agent sends its positions to each constraint-graph neighbour.
2. COST: convergecast from the deepest level up to the root. An agent is
   evaluated only once all of its children's COST messages are in its mailbox.
3. BEST: broadcast from the root down to the leaves.

After the broadcast every agent gets a local `finish_cycle` call, where it
updates its particles. Messages are counted exactly as they are sent.
"""
import logging
import time
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Protocol

import numpy as np
import pandas as pd

from errors import DeadlockDetected, ProtocolError
from runtime.messages import BEST_HEADER_SCALARS, BestPayload, CycleStats, Message, MessageKind
from runtime.pseudo_tree import PseudoTree

logger = logging.getLogger(__name__)

MESSAGE_LOG_COLUMNS = ["cycle", "kind", "from", "to", "payload_len"]


class CycleCallbacks(Protocol):
    def value_payload(self, agent: int) -> np.ndarray:
        ...

    def evaluate(
        self, agent: int, values: Dict[int, np.ndarray], costs: Dict[int, np.ndarray]
    ) -> Optional[np.ndarray]:
        """Return the COST payload for the parent, or None at the root."""

    def best_update(self, agent: int, best: Optional[BestPayload]) -> BestPayload:
        """Return the BEST payload forwarded to the children (the root receives None)."""

    def finish_cycle(self, agent: int) -> None:
        ...


class MessageLog:
    """Collects `cycle,kind,from,to,payload_len` rows."""

    def __init__(self):
        self.rows = []

    def add(self, cycle: int, message: Message):
        self.rows.append(
            (cycle, message.kind.value, message.sender, message.receiver, message.payload_len)
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=MESSAGE_LOG_COLUMNS)

    def write_csv(self, path):
        self.to_frame().to_csv(path, index=False)


class SynchronousRuntime:
    def __init__(self, tree: PseudoTree, message_log: Optional[MessageLog] = None):
        self.tree = tree
        self.message_log = message_log
        self.cycle = 0
        self.history = []
        self._mailboxes = defaultdict(list)
        self._stats = None

    def run_cycle(self, agents: Iterable[int], callbacks: CycleCallbacks) -> CycleStats:
        agents = sorted(agents)
        if agents != list(range(self.tree.num_agents)):
            raise ProtocolError(f"cycle must run every agent of the tree, got {agents}")

        self.cycle += 1
        self._stats = CycleStats(cycle=self.cycle, hops=1 + 2 * self.tree.height)
        start = time.perf_counter()
        tree = self.tree
        levels = tree.levels()

        for agent in agents:
            payload = callbacks.value_payload(agent)
            for neighbor in tree.neighbors[agent]:
                self._send(MessageKind.VALUE, agent, neighbor, payload)

        for level in reversed(levels):
            for agent in level:
                values = self._receive(agent, MessageKind.VALUE, tree.neighbors[agent])
                costs = self._receive(agent, MessageKind.COST, tree.children[agent])
                payload = callbacks.evaluate(agent, values, costs)
                if tree.is_root(agent):
                    continue
                if payload is None:
                    raise ProtocolError(f"agent {agent} produced no COST for its parent")
                self._send(MessageKind.COST, agent, tree.parent[agent], payload)

        for level in levels:
            for agent in level:
                best = None
                if not tree.is_root(agent):
                    parent = tree.parent[agent]
                    best = self._receive(agent, MessageKind.BEST, (parent,))[parent]
                payload = callbacks.best_update(agent, best)
                for child in tree.children[agent]:
                    self._send(MessageKind.BEST, agent, child, payload)

        for agent in agents:
            callbacks.finish_cycle(agent)

        undelivered = [m for box in self._mailboxes.values() for m in box]
        if undelivered:
            raise ProtocolError(f"{len(undelivered)} messages left undelivered in cycle {self.cycle}")

        stats = self._stats
        stats.duration_s = time.perf_counter() - start
        self.history.append(stats)
        return stats

    def _send(self, kind, sender, receiver, payload):
        message = Message(kind, sender, receiver, payload)
        self._mailboxes[receiver].append(message)
        self._stats.record(message)
        if self.message_log is not None:
            self.message_log.add(self.cycle, message)

    def _receive(self, agent, kind, senders) -> dict:
        box = self._mailboxes[agent]
        matching = [m for m in box if m.kind is kind]
        self._mailboxes[agent] = [m for m in box if m.kind is not kind]

        received = {}
        for message in matching:
            if message.sender in received:
                raise ProtocolError(f"duplicate {kind.value} from {message.sender} to {agent}")
            if message.sender not in senders:
                raise ProtocolError(f"unexpected {kind.value} from {message.sender} to {agent}")
            received[message.sender] = message.payload

        missing = [s for s in senders if s not in received]
        if missing:
            raise DeadlockDetected(
                f"agent {agent} waits for {kind.value} from {missing} in cycle {self.cycle}"
            )
        return received


def run_cycle(agents, tree: PseudoTree, phase_callbacks: CycleCallbacks, runtime=None) -> CycleStats:
    """Run one cycle; pass `runtime` to keep cycle numbering and history across calls."""
    runtime = runtime or SynchronousRuntime(tree)
    return runtime.run_cycle(agents, phase_callbacks)


def payload_bound(num_particles: int, num_neighbors: int, num_children: int) -> int:
    """Most scalars an agent may send in one cycle."""
    return (
        num_particles * (num_neighbors + 1 + num_children)
        + BEST_HEADER_SCALARS * num_children
    )


def expected_counts(tree: PseudoTree) -> dict:
    n = tree.num_agents
    return {
        "value": sum(len(nbrs) for nbrs in tree.neighbors),
        "cost": n - 1,
        "best": n - 1,
    }


@dataclass
class MessageSummary:
    cycles: int
    messages_per_agent: Dict[int, int]
    scalars_per_agent: Dict[int, int]
    max_cycle_scalars: Dict[int, int]
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def message_stats(history, tree: PseudoTree, num_particles: int) -> MessageSummary:
    """Per-agent totals over a run, checked against the count and size laws."""
    counts = expected_counts(tree)
    messages = defaultdict(int)
    scalars = defaultdict(int)
    max_cycle = defaultdict(int)
    violations = []

    for stats in history:
        observed = {
            "value": stats.value_messages,
            "cost": stats.cost_messages,
            "best": stats.best_messages,
        }
        if observed != counts:
            violations.append({
                "type": "message count",
                "description": f"cycle {stats.cycle}: {observed} != expected {counts}",
            })
        for agent in range(tree.num_agents):
            sent = stats.sent_scalars.get(agent, 0)
            messages[agent] += stats.sent_messages.get(agent, 0)
            scalars[agent] += sent
            max_cycle[agent] = max(max_cycle[agent], sent)
            bound = payload_bound(
                num_particles, len(tree.neighbors[agent]), len(tree.children[agent])
            )
            if sent > bound:
                violations.append({
                    "type": "message size",
                    "description": f"cycle {stats.cycle}: agent {agent} sent {sent} scalars > {bound}",
                })

    for v in violations:
        logger.warning(v["description"])
    return MessageSummary(
        cycles=len(history),
        messages_per_agent=dict(messages),
        scalars_per_agent=dict(scalars),
        max_cycle_scalars=dict(max_cycle),
        violations=violations,
    )
