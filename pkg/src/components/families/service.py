# src/components/families/service.py

import itertools
import logging
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from src.components.tuplespace.models import GroundSet, IndexSet, InjectiveTuple, Kernel
from src.components.tuplespace.service import (
    enumerate_tuples,
    int_atom,
    int_tuple,
    integer_range,
    kernel_pairs,
    pair_atom,
)
from src.core.models.errors import GroundTooSmall, IdentityKernel, IndexMismatch, NotAHomomorphism
from src.core.models.ontology import Side

from .models import Edge, FamilyDescriptor, Graph

logger = logging.getLogger(__name__)


def build_graph(
    vertices: Sequence[InjectiveTuple],
    arcs: Iterable[Edge],
    directed: bool,
    family: FamilyDescriptor,
) -> Graph:
    arcs = sorted(set(arcs))
    edges = sorted({(min(u, v), max(u, v)) for u, v in arcs})
    return Graph(
        vertices=tuple(vertices),
        edges=tuple(edges),
        directed_edges=tuple(arcs) if directed else None,
        family=family,
    )


def _join_arcs(
    vertices: Sequence,
    out_key: Callable[[int], Hashable],
    in_key: Callable[[int], Hashable],
    accept: Optional[Callable[[int, int], bool]] = None,
) -> Set[Edge]:
    """Arcs u->v where out_key(u) == in_key(v), bucketed on in_key."""
    buckets: Dict[Hashable, List[int]] = {}
    for v in range(len(vertices)):
        buckets.setdefault(in_key(v), []).append(v)
    arcs = set()
    for u in range(len(vertices)):
        for v in buckets.get(out_key(u), ()):
            if v != u and (accept is None or accept(u, v)):
                arcs.add((u, v))
    return arcs


def _check_shape(r: int, n: int, minimum_r: int = 1):
    if r < minimum_r:
        raise ValueError(f"r must be at least {minimum_r}, got {r}.")
    if n < r:
        raise GroundTooSmall(f"A ground set of size {n} has no injective {r}-tuples.")


def shift_graph(r: int, n: int, symmetric: bool = False) -> Graph:
    """Sh_r(n), or Sh_r^sym(n) on all injective tuples: s ~ t when s(i) = t(i-1) for 1 <= i < r."""
    _check_shape(r, n)
    vertices = list(enumerate_tuples(integer_range(n), IndexSet.range(r), increasing=not symmetric))
    arcs = _join_arcs(
        vertices,
        out_key=lambda u: vertices[u].values[1:],
        in_key=lambda v: vertices[v].values[:-1],
    )
    name = "shsym" if symmetric else "sh"
    logger.debug(f"Built {name}({r}, {n}) with {len(vertices)} vertices.")
    return build_graph(vertices, arcs, directed=False, family=FamilyDescriptor(name=name, params={"r": r, "n": n}))


def shift_kernel(r: int, side: Side) -> Kernel:
    if side == Side.LEFT:
        return Kernel(pairs=frozenset((i, i - 1) for i in range(1, r)))
    return Kernel(pairs=frozenset((i - 1, i) for i in range(1, r)))


def directed_shift(r: int, n: int, side: Side = Side.LEFT) -> Graph:
    """LSh_r(n) = D_f for f = {(i, i-1)}; RSh_r(n) uses f = {(i-1, i)}."""
    _check_shape(r, n)
    side = Side(side)
    g = graph_from_kernel(integer_range(n), IndexSet.range(r), shift_kernel(r, side), increasing=True, directed=True)
    name = "lsh" if side == Side.LEFT else "rsh"
    return g.model_copy(update={"family": FamilyDescriptor(name=name, params={"r": r, "n": n})})


def cyclic_sym(r: int, n: int) -> Graph:
    """Cyc_r^sym(n): injective r-tuples joined to their cyclic rotation."""
    _check_shape(r, n, minimum_r=2)
    vertices = list(enumerate_tuples(integer_range(n), IndexSet.range(r), increasing=False))
    position = {vertex.values: index for index, vertex in enumerate(vertices)}
    arcs = set()
    for u, vertex in enumerate(vertices):
        rotated = (vertex.values[-1],) + vertex.values[:-1]
        arcs.add((u, position[rotated]))
    return build_graph(vertices, arcs, directed=False, family=FamilyDescriptor(name="cyc", params={"r": r, "n": n}))


def bounded_glued(n_bar: Sequence[int], n: int) -> Graph:
    """
    Sh_{n_bar,b}(n). A vertex is a sequence of strictly increasing maps f_i: [0, n_i] -> n,
    encoded as one increasing tuple whose values are Pair(block, value). f ~ g when
    f_i(m) = g_i(m+1) for every block i and every m < n_i.
    """
    n_bar = list(n_bar)
    if not n_bar:
        raise ValueError("n_bar must name at least one block.")
    if min(n_bar) < 1:
        raise ValueError(f"Every block length must be positive, got {n_bar}.")
    if n <= max(n_bar):
        raise GroundTooSmall(f"Ground size {n} must exceed max(n_bar) = {max(n_bar)}.")

    per_block = [list(itertools.combinations(range(n), length + 1)) for length in n_bar]
    raw = list(itertools.product(*per_block))
    index = IndexSet.range(sum(length + 1 for length in n_bar))
    vertices = [
        InjectiveTuple(
            index=index,
            values=tuple(pair_atom(int_atom(i), int_atom(v)) for i, block in enumerate(blocks) for v in block),
            increasing=True,
        )
        for blocks in raw
    ]
    arcs = _join_arcs(
        vertices,
        out_key=lambda u: tuple(block[:-1] for block in raw[u]),
        in_key=lambda v: tuple(block[1:] for block in raw[v]),
    )
    logger.debug(f"Built glued graph for n_bar={n_bar}, n={n}: {len(vertices)} vertices, {len(arcs)} arcs.")
    return build_graph(
        vertices, arcs, directed=False,
        family=FamilyDescriptor(name="glued", params={"n_bar": n_bar, "n": n}),
    )


def glued_blocks(vertex: InjectiveTuple, n_bar: Sequence[int]) -> List[Tuple[int, ...]]:
    blocks: List[List[int]] = [[] for _ in n_bar]
    for value in vertex.values:
        blocks[int(value.left.number)].append(int(value.right.number))
    return [tuple(block) for block in blocks]


def graph_from_kernel(
    ground: GroundSet,
    j: IndexSet,
    f: Kernel,
    increasing: bool,
    directed: bool = False,
) -> Graph:
    """E_f (or D_f when directed) on the tuple space (ground^j) or (ground^j)_<."""
    if not (f.domain | f.range) <= set(j.labels):
        raise IndexMismatch(f"{f!r} references labels outside {list(j.labels)}.")
    if f.is_identity_on(j):
        raise IdentityKernel("The identity kernel would make every vertex a loop.")
    vertices = list(enumerate_tuples(ground, j, increasing))
    family = FamilyDescriptor(
        name="kernel",
        params={
            "kernel": f.model_dump(),
            "j": j.model_dump(),
            "ground": ground.size,
            "increasing": increasing,
            "directed": directed,
        },
    )
    return kernel_graph_on(vertices, f, directed=directed, family=family)


def kernel_graph_on(
    vertices: Sequence[InjectiveTuple],
    f: Kernel,
    directed: bool = False,
    family: Optional[FamilyDescriptor] = None,
) -> Graph:
    """The kernel graph induced on an explicit vertex list: a -> b iff f_{a,b} = f."""
    family = family or FamilyDescriptor(name="kernel_on", params={"kernel": f.model_dump(), "directed": directed})
    if not vertices:
        return build_graph([], [], directed, family)
    index = vertices[0].index
    if any(vertex.index != index for vertex in vertices):
        raise IndexMismatch("All vertices of a kernel graph share one index set.")
    if not (f.domain | f.range) <= set(index.labels):
        raise IndexMismatch(f"{f!r} references labels outside {list(index.labels)}.")
    if f.is_identity_on(index):
        raise IdentityKernel("The identity kernel would make every vertex a loop.")

    targets = sorted(f.range)
    preimage = f.inverse().mapping
    target_positions = [index.positions[label] for label in targets]
    source_positions = [index.positions[preimage[label]] for label in targets]
    arcs = _join_arcs(
        vertices,
        out_key=lambda u: tuple(vertices[u].values[p] for p in source_positions),
        in_key=lambda v: tuple(vertices[v].values[p] for p in target_positions),
        accept=lambda u, v: kernel_pairs(vertices[u], vertices[v]) == f.pairs,
    )
    return build_graph(vertices, arcs, directed, family)


def image_graph(
    source: Graph,
    vertex_fn: Callable[[InjectiveTuple], InjectiveTuple],
    name: str = "image",
) -> Tuple[Graph, List[int]]:
    """
    The graph on the distinct images of `vertex_fn`, with the images of the source edges.
    Returns it with the assignment source index -> image index.
    """
    images: List[InjectiveTuple] = []
    position: Dict[InjectiveTuple, int] = {}
    assignment = []
    for vertex in source.vertices:
        image = vertex_fn(vertex)
        if image not in position:
            position[image] = len(images)
            images.append(image)
        assignment.append(position[image])

    arcs = source.directed_edges if source.is_directed else source.edges
    mapped = set()
    for u, v in arcs:
        a, b = assignment[u], assignment[v]
        if a == b:
            raise NotAHomomorphism(f"Adjacent vertices {source.vertices[u]!r} and {source.vertices[v]!r} share an image.")
        mapped.add((a, b))
    graph = build_graph(images, mapped, source.is_directed, FamilyDescriptor(name=name, params={"source": source.family.model_dump()}))
    return graph, assignment


# --- Small standard families ---

def graph_from_edges(n: int, edges: Iterable[Edge], name: str = "custom", params: Optional[dict] = None) -> Graph:
    vertices = [int_tuple([i]) for i in range(n)]
    return build_graph(vertices, edges, directed=False, family=FamilyDescriptor(name=name, params=params or {"n": n}))


def complete_graph(n: int) -> Graph:
    return graph_from_edges(n, itertools.combinations(range(n), 2), name="complete")


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("Cycles need at least three vertices.")
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)], name="cycle")


def edgeless_graph(n: int) -> Graph:
    return graph_from_edges(n, [], name="edgeless")


def from_networkx(g: nx.Graph, name: str = "networkx") -> Graph:
    order = sorted(g.nodes)
    position = {node: index for index, node in enumerate(order)}
    return graph_from_edges(len(order), [(position[u], position[v]) for u, v in g.edges if u != v], name=name)


def random_graph(n: int, p: float, seed: int) -> Graph:
    return graph_from_edges(
        n, nx.gnp_random_graph(n, p, seed=seed).edges, name="random", params={"n": n, "p": p, "seed": seed}
    )
