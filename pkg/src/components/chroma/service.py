# src/components/chroma/service.py

import logging
import sys
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from src.components.families.models import Edge, Graph
from src.components.families.service import graph_from_edges
from src.core.config import Settings
from src.core.models.errors import CoverGap, MissingVertex
from src.core.models.ontology import CertificateKind
from src.core.monitoring.service import RunMonitor

from .models import Coloring, LowerBoundCertificate, SolveReport, SolveStats
from .solvers import Budget, SolverTimeout, branch_and_bound, dsatur_greedy, k_colorable, max_clique

logger = logging.getLogger(__name__)

GREEDY_STRATEGIES = {
    "dsatur": "saturation_largest_first",
    "largest_first": "largest_first",
    "smallest_last": "smallest_last",
    "independent_set": "independent_set",
    "connected_sequential_bfs": "connected_sequential_bfs",
}


class ChromaService:
    """
    Coloring validation and chromatic-number computation.
    """
    def __init__(self, settings: Settings, monitor: RunMonitor):
        self.settings = settings
        self.monitor = monitor
        logger.info("ChromaService initialized.")

    def validate(self, g: Graph, c: Coloring) -> List[Edge]:
        """Edges whose endpoints share a color; empty iff the coloring is proper."""
        missing = [v for v in range(g.n) if v not in c.assignment]
        if missing:
            raise MissingVertex(f"Vertices {missing[:10]} have no color.")
        return [(u, v) for u, v in g.edges if c.assignment[u] == c.assignment[v]]

    def chi_greedy(self, g: Graph, order: Union[str, Sequence[int]] = "dsatur") -> Coloring:
        nxg = g.to_networkx()
        if isinstance(order, str):
            if order not in GREEDY_STRATEGIES:
                raise ValueError(f"Unknown greedy strategy '{order}'. Choose from {sorted(GREEDY_STRATEGIES)}.")
            strategy = GREEDY_STRATEGIES[order]
        else:
            order = list(order)
            if sorted(order) != list(range(g.n)):
                raise ValueError("A greedy order must list every vertex exactly once.")
            strategy = lambda graph, colors: iter(order)  # noqa: E731
        colors = nx.greedy_color(nxg, strategy=strategy)
        return Coloring.from_list([colors[v] for v in range(g.n)])

    def chi_exact(self, g: Graph, time_budget: Optional[float] = None) -> SolveReport:
        """Exact chromatic number by DSATUR branch and bound seeded with a maximum clique."""
        budget = Budget(time_budget or self.settings.solver_time_budget)
        self._allow_depth(g.n)
        adjacency = g.adjacency
        clique = max_clique(adjacency)
        initial = dsatur_greedy(adjacency)
        best_colors, best = list(initial), (max(initial) + 1 if g.n else 0)
        exact = True
        try:
            best_colors, best = branch_and_bound(adjacency, budget, clique, initial)
        except SolverTimeout:
            logger.warning(f"chi_exact ran out of budget on {g.n} vertices; reporting bounds.")
            exact = False
        return self._report(g, best_colors, best, clique, budget, exact, "branch_and_bound")

    def chi_by_decision(self, g: Graph, time_budget: Optional[float] = None) -> SolveReport:
        """Exact chromatic number by asking k-colorability for k = clique size, clique size + 1, ..."""
        budget = Budget(time_budget or self.settings.solver_time_budget)
        self._allow_depth(g.n)
        adjacency = g.adjacency
        clique = max_clique(adjacency)
        upper = dsatur_greedy(adjacency)
        best_colors, best = upper, (max(upper) + 1 if g.n else 0)
        exact = True
        proven = len(clique)
        try:
            for k in range(len(clique), best):
                found = k_colorable(adjacency, k, budget, clique)
                if found is not None:
                    best_colors, best = found, k
                    break
                proven = k + 1
        except SolverTimeout:
            logger.warning(f"chi_by_decision ran out of budget at k={proven} on {g.n} vertices.")
            exact = False
        return self._report(g, best_colors, best, clique, budget, exact, "k_colorability", proven)

    def _report(self, g, colors, chi, clique, budget, exact, method, proven: Optional[int] = None) -> SolveReport:
        witness = Coloring.from_list(list(colors), palette_size=chi)
        if not exact:
            certificate = None
            lower = max(len(clique), proven or 0)
        elif chi == len(clique):
            certificate = LowerBoundCertificate(kind=CertificateKind.CLIQUE_FOUND, clique=list(clique))
            lower = chi
        else:
            certificate = LowerBoundCertificate(kind=CertificateKind.EXHAUSTION_PROOF, k=chi - 1, nodes=budget.nodes)
            lower = chi
        report = SolveReport(
            chi=chi,
            witness=witness,
            lower_bound=lower,
            certificate=certificate,
            exact=exact,
            stats=SolveStats(nodes=budget.nodes, wall_time=budget.elapsed, method=method),
        )
        self.monitor.log_solver_run(method, g.n, chi, exact, {"nodes": budget.nodes, "wall_time": budget.elapsed})
        return report

    @staticmethod
    def _allow_depth(n: int):
        if sys.getrecursionlimit() < n + 500:
            sys.setrecursionlimit(n + 500)


# --- Combinators ---

def sum_coloring(g: Graph, parts: Sequence[Tuple[Iterable[int], Coloring]]) -> Coloring:
    """
    Color v by (c_i(v), i) for the first part i containing v, flattened as offset_i + c_i(v)
    where offset_i is the total palette of the earlier parts.
    """
    parts = [(set(vertices), coloring) for vertices, coloring in parts]
    offsets, total = [], 0
    for _, coloring in parts:
        offsets.append(total)
        total += coloring.palette_size
    colors = {}
    for v in range(g.n):
        owner = next((i for i, (vertices, _) in enumerate(parts) if v in vertices), None)
        if owner is None:
            raise CoverGap(f"Vertex {v} lies in no part.")
        coloring = parts[owner][1]
        if v not in coloring.assignment:
            raise MissingVertex(f"Part {owner} does not color vertex {v}.")
        colors[v] = offsets[owner] + coloring.assignment[v]
    return Coloring(assignment=colors, palette_size=total)


def product_coloring(g: Graph, edge_parts: Sequence[Tuple[Iterable[Edge], Coloring]]) -> Coloring:
    """
    Color v by the tuple (c_1(v), ..., c_k(v)) of part colors, flattened in mixed radix:
    sum of c_i(v) * p_1 * ... * p_{i-1}.
    """
    covered = set()
    for edges, _ in edge_parts:
        covered |= {(min(u, v), max(u, v)) for u, v in edges}
    gap = g.edge_set - covered
    if gap:
        raise CoverGap(f"Edges {sorted(gap)[:5]} lie in no part.")
    palette = 1
    colors = {v: 0 for v in range(g.n)}
    for _, coloring in edge_parts:
        for v in range(g.n):
            if v not in coloring.assignment:
                raise MissingVertex(f"A part coloring misses vertex {v}.")
            colors[v] += coloring.assignment[v] * palette
        palette *= coloring.palette_size
    return Coloring(assignment=colors, palette_size=palette)


def duplicate_vertex(g: Graph, v: int) -> Tuple[Graph, List[int]]:
    """
    Add a twin of v adjacent to v's neighbours. Returns the larger graph with the surjective
    strict homomorphism onto g that folds the twin back onto v.
    """
    twin = g.n
    edges = list(g.edges) + [(w, twin) for w in sorted(g.adjacency[v])]
    bigger = graph_from_edges(g.n + 1, edges, name="duplicate", params={"of": g.family.model_dump(), "vertex": v})
    return bigger, list(range(g.n)) + [v]


def colour_classes(c: Coloring) -> List[List[int]]:
    classes: List[List[int]] = [[] for _ in range(c.palette_size)]
    for v, color in sorted(c.assignment.items()):
        classes[color].append(v)
    return classes
