"""Vertex connectivity.

Small graphs are handled by enumerating vertex cuts; larger ones by
networkx's flow-based node connectivity.
"""

from __future__ import annotations

from itertools import combinations

import networkx as nx

from .model import TensegrityGraph

EXHAUSTIVE_LIMIT = 12


def _connected_without(adj: list[set[int]], removed: set[int]) -> bool:
    alive = [v for v in range(len(adj)) if v not in removed]
    if len(alive) <= 1:
        return True
    seen = {alive[0]}
    stack = [alive[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen and w not in removed:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(alive)


def has_small_cut(g: TensegrityGraph, m: int) -> bool:
    """Exhaustively look for a vertex cut with fewer than ``m`` vertices."""
    adj = g.adjacency()
    n = g.vertex_count
    for size in range(0, min(m, n - 1)):
        for cut in combinations(range(n), size):
            if n - size >= 2 and not _connected_without(adj, set(cut)):
                return True
    return False


def vertex_connectivity(g: TensegrityGraph) -> int:
    """Node connectivity; the complete graph on ``k`` vertices counts as ``k - 1``."""
    G = nx.Graph()
    G.add_nodes_from(range(g.vertex_count))
    G.add_edges_from(g.pairs)
    if g.vertex_count == 1:
        return 0
    return int(nx.node_connectivity(G))


def vertex_connectivity_at_least(g: TensegrityGraph, m: int) -> bool:
    if m < 1:
        raise ValueError("m must be at least 1")
    n = g.vertex_count
    if m > n - 1:
        return False
    if n <= EXHAUSTIVE_LIMIT:
        return not has_small_cut(g, m)
    return vertex_connectivity(g) >= m
