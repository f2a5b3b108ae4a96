"""
Runtime
=======

Pseudo-tree construction and the synchronous message-passing substrate.
"""
from runtime.messages import BestPayload, CycleStats, Message, MessageKind
from runtime.pseudo_tree import (
    PseudoTree,
    build_bfs,
    format_tree_edges,
    height,
    validate_pseudo_tree,
)
from runtime.simulator import (
    MessageLog,
    SynchronousRuntime,
    message_stats,
    payload_bound,
    run_cycle,
)

__all__ = [
    "BestPayload",
    "CycleStats",
    "Message",
    "MessageKind",
    "MessageLog",
    "PseudoTree",
    "SynchronousRuntime",
    "build_bfs",
    "format_tree_edges",
    "height",
    "message_stats",
    "payload_bound",
    "run_cycle",
    "validate_pseudo_tree",
]
