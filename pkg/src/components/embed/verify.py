# src/components/embed/verify.py

import logging
from typing import Iterable, List

from src.components.families.models import Graph
from src.components.families.service import image_graph, shift_graph
from src.components.tuplespace.service import restrict

from .models import EmbedReport, VertexMap

logger = logging.getLogger(__name__)

MAX_COUNTEREXAMPLES = 20


def _arcs(g: Graph, directed: bool) -> Iterable:
    return g.directed_edges if directed else g.edges


def verify_map(m: VertexMap, directed: bool = False) -> EmbedReport:
    """
    Check that every source edge lands on a target edge (arcs keep their orientation when
    `directed`), whether distinct vertices stay distinct, and whether target edges among
    the images come only from source edges.
    """
    if directed and not (m.source.is_directed and m.target.is_directed):
        raise ValueError("Directed verification needs directed source and target graphs.")

    problems: List[str] = []
    homomorphism = True
    checked = 0
    for u, v in _arcs(m.source, directed):
        checked += 1
        a, b = m.assignment[u], m.assignment[v]
        ok = m.target.has_arc(a, b) if directed else (a != b and m.target.has_edge(a, b))
        if not ok:
            homomorphism = False
            if len(problems) < MAX_COUNTEREXAMPLES:
                problems.append(
                    f"edge {m.source.vertices[u]!r} -> {m.source.vertices[v]!r} maps to "
                    f"{m.target.vertices[a]!r}, {m.target.vertices[b]!r}"
                )

    injective = len(set(m.assignment)) == len(m.assignment)

    induced = injective
    if injective:
        preimage = {image: u for u, image in enumerate(m.assignment)}
        source_arcs = m.source.arc_set if directed else m.source.edge_set
        for a, b in _arcs(m.target, directed):
            if a in preimage and b in preimage:
                u, v = preimage[a], preimage[b]
                pair = (u, v) if directed else (min(u, v), max(u, v))
                if pair not in source_arcs:
                    induced = False
                    if len(problems) < MAX_COUNTEREXAMPLES:
                        problems.append(f"target edge {m.target.vertices[a]!r} ~ {m.target.vertices[b]!r} has no source edge")
                    break

    report = EmbedReport(
        is_homomorphism=homomorphism,
        is_injective=injective,
        is_induced=induced,
        counterexamples=problems,
        edges_checked=checked,
    )
    logger.debug(
        f"Verified map {m.source.family.name} -> {m.target.family.name}: hom={homomorphism}, "
        f"injective={injective}, induced={induced}, edges={checked}."
    )
    return report


def compose(first: VertexMap, second: VertexMap) -> VertexMap:
    """second after first; the target of `first` must be the source of `second`."""
    if first.target.n != second.source.n or first.target.vertices != second.source.vertices:
        raise ValueError("Maps compose only when the middle graphs agree.")
    return VertexMap(
        source=first.source,
        target=second.target,
        assignment=[second.assignment[image] for image in first.assignment],
    )


def identity_map(g: Graph) -> VertexMap:
    return VertexMap(source=g, target=g, assignment=list(range(g.n)))


def planted_homomorphism(k: int, m: int, coordinates: Iterable[int]) -> VertexMap:
    """
    Sh_k(m) onto the graph of its projections to `coordinates`; two tuples share an image
    exactly when they agree there. Raises NotAHomomorphism when adjacent tuples collide.
    """
    coordinates = sorted(set(coordinates))
    if any(not 0 <= c < k for c in coordinates):
        raise ValueError(f"Coordinates {coordinates} fall outside [0, {k}).")
    source = shift_graph(k, m)
    target, assignment = image_graph(source, lambda vertex: restrict(vertex, coordinates), name="planted")
    return VertexMap(source=source, target=target, assignment=assignment)
