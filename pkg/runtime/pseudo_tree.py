"""
BFS Pseudo-Tree
===============

Spanning tree of the constraint graph used for COST convergecast and BEST
broadcast. Constraint edges that are not tree edges stay as neighbour links.

The traversal is deterministic: the queue is FIFO and a node's unvisited
neighbours are enqueued in ascending id.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import networkx as nx

from cdcop.instance import CdcopInstance
from errors import DisconnectedGraph


@dataclass(frozen=True)
class PseudoTree:
    root: int
    parent: Tuple[Optional[int], ...]
    children: Tuple[Tuple[int, ...], ...]
    neighbors: Tuple[Tuple[int, ...], ...]
    depth: Tuple[int, ...]

    @property
    def num_agents(self) -> int:
        return len(self.parent)

    @property
    def height(self) -> int:
        return max(self.depth, default=0)

    def is_root(self, agent) -> bool:
        return agent == self.root

    def levels(self):
        """Agents grouped by depth, root level first, ascending id within a level."""
        levels = [[] for _ in range(self.height + 1)]
        for agent, d in enumerate(self.depth):
            levels[d].append(agent)
        return levels

    def tree_edges(self):
        return [
            (p, agent) if p < agent else (agent, p)
            for agent, p in enumerate(self.parent)
            if p is not None
        ]

    def non_tree_edges(self):
        tree = set(self.tree_edges())
        return [
            (a, b)
            for a, nbrs in enumerate(self.neighbors)
            for b in nbrs
            if a < b and (a, b) not in tree
        ]


def build_bfs(inst: CdcopInstance, root: int = 0) -> PseudoTree:
    if not 0 <= root < inst.num_agents:
        raise ValueError(f"root {root} is not an agent of a {inst.num_agents}-agent instance")

    parent = [None] * inst.num_agents
    depth = [0] * inst.num_agents
    children = [[] for _ in inst.agents]
    reached = {root}
    for p, agent in nx.bfs_edges(inst.graph, root, sort_neighbors=sorted):
        parent[agent] = p
        depth[agent] = depth[p] + 1
        children[p].append(agent)
        reached.add(agent)

    if len(reached) != inst.num_agents:
        missing = sorted(set(inst.agents) - reached)
        raise DisconnectedGraph(f"BFS from agent {root} misses agents {missing}")

    return PseudoTree(
        root=root,
        parent=tuple(parent),
        children=tuple(tuple(sorted(c)) for c in children),
        neighbors=tuple(inst.neighbors(a) for a in inst.agents),
        depth=tuple(depth),
    )


def height(tree: PseudoTree) -> int:
    return tree.height


def validate_pseudo_tree(tree: PseudoTree, inst: CdcopInstance) -> list:
    """Check tree consistency against the instance; an empty list means ok."""
    issues = []
    n = inst.num_agents
    if tree.num_agents != n or len(tree.children) != n or len(tree.neighbors) != n:
        return [{
            "type": "size mismatch",
            "description": f"tree covers {tree.num_agents} agents, instance has {n}",
        }]

    if tree.parent[tree.root] is not None:
        issues.append({"type": "rooted parent", "description": f"root {tree.root} has a parent"})

    for agent in inst.agents:
        p = tree.parent[agent]
        if agent != tree.root and p is None:
            issues.append({"type": "orphan", "description": f"agent {agent} has no parent"})
        if p is not None and agent not in tree.children[p]:
            issues.append({
                "type": "parent/child mismatch",
                "description": f"agent {agent} names {p} as parent but is not its child",
            })
        for child in tree.children[agent]:
            if tree.parent[child] != agent:
                issues.append({
                    "type": "parent/child mismatch",
                    "description": f"agent {child} is a child of {agent} but names {tree.parent[child]} as parent",
                })
            if child not in tree.neighbors[agent]:
                issues.append({
                    "type": "non-neighbour child",
                    "description": f"child {child} of agent {agent} is not a neighbour",
                })

        expected = inst.neighbors(agent)
        if tuple(sorted(tree.neighbors[agent])) != expected:
            issues.append({
                "type": "neighbour mismatch",
                "description": f"agent {agent} neighbours {tree.neighbors[agent]} != graph {expected}",
            })

    for agent in inst.agents:
        seen = {agent}
        current = tree.parent[agent]
        while current is not None:
            if current in seen:
                issues.append({
                    "type": "cycle",
                    "description": f"parent links from agent {agent} revisit agent {current}",
                })
                break
            seen.add(current)
            current = tree.parent[current]
        else:
            if agent != tree.root and tree.root not in seen:
                issues.append({
                    "type": "detached",
                    "description": f"parent links from agent {agent} never reach the root",
                })

    if not issues:
        for agent in inst.agents:
            p = tree.parent[agent]
            expected_depth = 0 if p is None else tree.depth[p] + 1
            if tree.depth[agent] != expected_depth:
                issues.append({
                    "type": "depth mismatch",
                    "description": f"agent {agent} depth {tree.depth[agent]} != {expected_depth}",
                })
    return issues


def format_tree_edges(tree: PseudoTree) -> str:
    """Debug dump: one `i j tree|non-tree` line per constraint edge."""
    lines = [f"{a} {b} tree" for a, b in sorted(tree.tree_edges())]
    lines += [f"{a} {b} non-tree" for a, b in sorted(tree.non_tree_edges())]
    return "\n".join(lines)
