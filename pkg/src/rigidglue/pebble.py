"""The (2,3) pebble game for generic rigidity in the plane."""

from __future__ import annotations

from .model import TensegrityGraph


class PebbleGame:
    """Incremental (2,3) pebble game.

    Every vertex starts with two pebbles.  An edge is independent when four
    pebbles can be gathered on its endpoints; it is then oriented away from
    the endpoint that paid for it.
    """

    K, L = 2, 3

    def __init__(self, n: int):
        self.n = n
        self.pebbles = [self.K] * n
        self.out: list[set[int]] = [set() for _ in range(n)]
        self.independent: list[tuple[int, int]] = []

    def _find_pebble(self, root: int, blocked: set[int]) -> bool:
        # DFS along oriented edges for a free pebble, then reverse the path.
        parent = {root: -1}
        stack = [root]
        while stack:
            v = stack.pop()
            for w in self.out[v]:
                if w in parent or w in blocked:
                    continue
                parent[w] = v
                if self.pebbles[w] > 0:
                    self.pebbles[w] -= 1
                    self.pebbles[root] += 1
                    while parent[w] != -1:
                        u = parent[w]
                        self.out[u].discard(w)
                        self.out[w].add(u)
                        w = u
                    return True
                stack.append(w)
        return False

    def add_edge(self, u: int, v: int) -> bool:
        """Try to insert ``{u, v}``; returns whether it was independent."""
        if u == v:
            return False
        blocked = {u, v}
        while self.pebbles[u] < self.K:
            if not self._find_pebble(u, blocked):
                break
        while self.pebbles[v] < self.K:
            if not self._find_pebble(v, blocked):
                break
        if self.pebbles[u] + self.pebbles[v] < self.L + 1:
            return False
        self.pebbles[u] -= 1
        self.out[u].add(v)
        self.independent.append((u, v))
        return True


def independent_edge_count(g: TensegrityGraph) -> int:
    game = PebbleGame(g.vertex_count)
    for m in g:
        game.add_edge(m.i, m.j)
    return len(game.independent)


def pebble_game_rigid_2d(g: TensegrityGraph) -> bool:
    """Generic rigidity in the plane: a spanning (2,3)-tight subgraph exists."""
    n = g.vertex_count
    if n == 1:
        return True
    return independent_edge_count(g) == 2 * n - 3
