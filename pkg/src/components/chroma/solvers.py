# src/components/chroma/solvers.py

import logging
import time
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

logger = logging.getLogger(__name__)

Adjacency = Sequence[FrozenSet[int]]


class SolverTimeout(Exception):
    """Raised inside a search when the time budget is spent."""


class _SearchComplete(Exception):
    pass


class Budget:
    """Counts search nodes and enforces an optional wall-clock deadline."""

    def __init__(self, seconds: Optional[float] = None):
        self.started = time.monotonic()
        self.deadline = self.started + seconds if seconds else None
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise SolverTimeout(f"Budget exhausted after {self.nodes} nodes.")

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started


def dsatur_greedy(adjacency: Adjacency) -> List[int]:
    """
    DSATUR: repeatedly color the uncolored vertex with the most distinct neighbour colors,
    breaking ties by degree and then by lowest index, with its smallest free color.
    """
    n = len(adjacency)
    colors = [-1] * n
    seen: List[set] = [set() for _ in range(n)]
    for _ in range(n):
        v = max(
            (u for u in range(n) if colors[u] < 0),
            key=lambda u: (len(seen[u]), len(adjacency[u]), -u),
        )
        c = 0
        while c in seen[v]:
            c += 1
        colors[v] = c
        for w in adjacency[v]:
            seen[w].add(c)
    return colors


def max_clique(adjacency: Adjacency) -> List[int]:
    """An exact maximum clique (networkx branch and bound on unit weights)."""
    if not adjacency:
        return []
    g = nx.Graph()
    g.add_nodes_from(range(len(adjacency)))
    g.add_edges_from((u, v) for u, nbrs in enumerate(adjacency) for v in nbrs if u < v)
    clique, _ = nx.max_weight_clique(g, weight=None)
    return sorted(clique)


def branch_and_bound(
    adjacency: Adjacency,
    budget: Budget,
    clique: Sequence[int],
    initial: Sequence[int],
) -> Tuple[List[int], int]:
    """
    DSATUR-ordered exact coloring. The clique is precolored 0..|Q|-1, the initial coloring
    sets the upper bound, and the search stops as soon as it meets the clique bound.
    Returns the best coloring found and its palette size.
    """
    n = len(adjacency)
    lower = len(clique)
    best = max(initial) + 1 if n else 0
    best_colors = list(initial)
    if best <= lower:
        return best_colors, best

    colors = [-1] * n
    counts: List[Dict[int, int]] = [dict() for _ in range(n)]
    degrees = [len(nbrs) for nbrs in adjacency]

    def assign(v: int, c: int):
        colors[v] = c
        for w in adjacency[v]:
            counts[w][c] = counts[w].get(c, 0) + 1

    def unassign(v: int, c: int):
        colors[v] = -1
        for w in adjacency[v]:
            if counts[w][c] == 1:
                del counts[w][c]
            else:
                counts[w][c] -= 1

    for c, v in enumerate(clique):
        assign(v, c)
    uncolored = set(range(n)) - set(clique)

    def dfs(used: int):
        nonlocal best, best_colors
        budget.tick()
        if not uncolored:
            best, best_colors = used, colors[:]
            logger.debug(f"Branch and bound improved to {best} colors after {budget.nodes} nodes.")
            if best <= lower:
                raise _SearchComplete()
            return
        v = max(uncolored, key=lambda u: (len(counts[u]), degrees[u], -u))
        forbidden = counts[v]
        uncolored.remove(v)
        for c in range(min(used + 1, best - 1)):
            if c in forbidden:
                continue
            assign(v, c)
            dfs(max(used, c + 1))
            unassign(v, c)
        uncolored.add(v)

    try:
        dfs(lower)
    except _SearchComplete:
        pass
    return best_colors, best


def k_colorable(adjacency: Adjacency, k: int, budget: Budget, clique: Sequence[int] = ()) -> Optional[List[int]]:
    """
    Backtracking CSP for a k-coloring: minimum-remaining-values ordering, forward checking,
    and new colors introduced only in increasing order.
    """
    n = len(adjacency)
    if len(clique) > k:
        return None
    colors = [-1] * n
    domains = [set(range(k)) for _ in range(n)]
    degrees = [len(nbrs) for nbrs in adjacency]

    def prune(v: int, c: int) -> Optional[List[int]]:
        removed = []
        for w in adjacency[v]:
            if colors[w] < 0 and c in domains[w]:
                domains[w].discard(c)
                removed.append(w)
                if not domains[w]:
                    return removed + [-1]
        return removed

    def restore(removed: List[int], c: int):
        for w in removed:
            if w >= 0:
                domains[w].add(c)

    for c, v in enumerate(clique):
        colors[v] = c
        domains[v] = {c}
        removed = prune(v, c)
        if removed and removed[-1] == -1:
            return None

    def search(highest: int) -> bool:
        budget.tick()
        free = [u for u in range(n) if colors[u] < 0]
        if not free:
            return True
        v = min(free, key=lambda u: (len(domains[u]), -degrees[u], u))
        for c in sorted(domains[v]):
            if c > highest + 1:
                break
            colors[v] = c
            removed = prune(v, c)
            if not (removed and removed[-1] == -1) and search(max(highest, c)):
                return True
            restore(removed, c)
            colors[v] = -1
        return False

    if search(len(clique) - 1):
        return colors
    return None
