# src/components/chroma/constructions.py

import logging
import math
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

from src.components.families.models import Graph
from src.components.families.service import graph_from_edges, shift_graph
from src.components.tuplespace.service import falling_factorial
from src.core.models.errors import CycleDetected, NonBinaryGround, TowerTooLarge, VerificationFailed, WrongFamily

from .models import Coloring, ColoredGraph

logger = logging.getLogger(__name__)


def binary_strings(m: int) -> List[str]:
    return [format(v, f"0{m}b") for v in range(2 ** m)]


def first_difference(x: int, y: int, m: int) -> int:
    """Index (from the left) of the first bit where two m-bit strings differ."""
    return m - (x ^ y).bit_length()


def eh_color(x: int, y: int, m: int) -> int:
    """
    Color of the pair (x, y) of distinct m-bit strings: the first-difference index, offset
    by m when the pair decreases. Adjacent pairs (x, y), (y, z) never share a color: in
    one half both indices would be equal, and then the strings have no room at that bit.
    """
    half = 0 if x < y else 1
    return half * m + first_difference(x, y, m)


def eh_pair_coloring(strings: Sequence[str]) -> ColoredGraph:
    """Color Sh_2^sym over all binary strings of one length m with at most 2m colors."""
    strings = list(strings)
    if not strings:
        raise NonBinaryGround("The ground set is empty.")
    m = len(strings[0])
    if m < 1 or any(len(s) != m or set(s) - {"0", "1"} for s in strings):
        raise NonBinaryGround("Every ground element must be a binary string of one common length.")
    if sorted(set(strings)) != binary_strings(m):
        raise NonBinaryGround(f"Expected all {2 ** m} binary strings of length {m}.")

    graph = shift_graph(2, 2 ** m, symmetric=True)
    colors = {}
    for index, vertex in enumerate(graph.vertices):
        x, y = (int(atom.number) for atom in vertex.values)
        colors[index] = eh_color(x, y, m)
    logger.debug(f"Colored Sh_2^sym over {2 ** m} strings with {len(set(colors.values()))} colors.")
    return ColoredGraph(graph=graph, coloring=Coloring(assignment=colors, palette_size=2 * m))


def tower(height: int, m: int, cap: int) -> int:
    """2^2^...^m with `height` exponentials; any value above `cap` is reported as cap + 1."""
    value = m
    for _ in range(height):
        if value >= cap.bit_length():
            return cap + 1
        value = 2 ** value
    return value


def recursive_color_function(r: int, ground_size: int) -> Tuple[Callable[[Tuple[int, ...]], int], int]:
    """
    A proper coloring of Sh_r^sym(ground_size) as a function on value tuples, with its palette.
    Level r maps u to the pair (d(u_0..u_{r-2}), d(u_1..u_{r-1})) of level-(r-1) colors, read as
    binary strings, and colors that pair of distinct strings by the first-difference rule.
    """
    if r == 2:
        m = ground_size.bit_length() - 1
        if 2 ** m != ground_size:
            raise ValueError(f"The base level needs a power-of-two ground, got {ground_size}.")
        return (lambda u: eh_color(u[0], u[1], m)), 2 * m

    inner, inner_palette = recursive_color_function(r - 1, ground_size)
    inner = lru_cache(maxsize=None)(inner)
    width = max(1, math.ceil(math.log2(inner_palette)))

    def color(u: Tuple[int, ...]) -> int:
        head, tail = inner(u[:-1]), inner(u[1:])
        if head == tail:
            raise VerificationFailed(f"Adjacent tuples {u[:-1]} and {u[1:]} share color {head}.")
        return eh_color(head, tail, width)

    return color, 2 * width


def recursive_shift_coloring(r: int, m: int, tower_guard: int = 2 ** 16, max_vertices: int = 200_000) -> ColoredGraph:
    """Color Sh_r^sym over a ground set of size tower(r-1, m) through the recursive pair map."""
    if r < 2:
        raise ValueError("The recursive coloring starts at r = 2.")
    if m < 1:
        raise ValueError("m must be positive.")
    ground_size = tower(r - 1, m, tower_guard)
    if ground_size > tower_guard:
        raise TowerTooLarge(f"tower({r - 1}, {m}) exceeds the guard of {tower_guard} atoms.")
    if falling_factorial(ground_size, r) > max_vertices:
        raise TowerTooLarge(f"Sh_{r}^sym({ground_size}) has more than {max_vertices} vertices.")

    color, palette = recursive_color_function(r, ground_size)
    graph = shift_graph(r, ground_size, symmetric=True)
    colors = {
        index: color(tuple(int(atom.number) for atom in vertex.values))
        for index, vertex in enumerate(graph.vertices)
    }
    logger.info(f"Recursive coloring of Sh_{r}^sym({ground_size}): palette {palette}, {len(set(colors.values()))} used.")
    return ColoredGraph(graph=graph, coloring=Coloring(assignment=colors, palette_size=palette))


def cycle_coloring(g: Graph) -> Coloring:
    """Walk each component of Cyc_r^sym as a cycle: alternate 0/1, closing with 2 when r is odd."""
    if g.family.name != "cyc":
        raise WrongFamily(f"cycle_coloring needs a cyclic_sym graph, got family '{g.family.name}'.")
    r = g.family.params["r"]
    colors: Dict[int, int] = {}
    for component in g.components():
        if len(component) != r:
            raise VerificationFailed(f"Component {component} is not a cycle of length {r}.")
        walk = [component[0]]
        while len(walk) < r:
            current = walk[-1]
            nxt = min(w for w in g.adjacency[current] if w not in walk)
            walk.append(nxt)
        for position, v in enumerate(walk):
            colors[v] = position % 2
        if r % 2 == 1:
            colors[walk[-1]] = 2
    return Coloring(assignment=colors, palette_size=2 if r % 2 == 0 else 3)


def successor_graph(vertices: Sequence[int], successor: Mapping[int, int]) -> Graph:
    """The undirected graph {x, successor(x)} on vertex ids 0..len(vertices)-1."""
    position = {v: i for i, v in enumerate(vertices)}
    return graph_from_edges(
        len(vertices),
        [(position[x], position[y]) for x, y in successor.items()],
        name="successor",
    )


def zorbit_coloring(vertices: Iterable[int], successor: Mapping[int, int]) -> Coloring:
    """
    2-color the trace of a free Z-action: each successor path is colored by the parity of the
    distance from its first vertex.
    """
    vertices = list(vertices)
    known = set(vertices)
    if not set(successor) <= known or not set(successor.values()) <= known:
        raise ValueError("The successor map must stay inside the vertex set.")
    if len(set(successor.values())) != len(successor):
        raise ValueError("The successor map must be injective.")
    if any(x == y for x, y in successor.items()):
        raise CycleDetected("A fixed point is a cycle of length one.")

    has_predecessor = set(successor.values())
    colors: Dict[int, int] = {}
    for start in vertices:
        if start in has_predecessor:
            continue
        current, parity = start, 0
        while True:
            colors[current] = parity
            if current not in successor:
                break
            current, parity = successor[current], 1 - parity

    stuck = [v for v in vertices if v not in colors]
    if stuck:
        raise CycleDetected(f"Vertices {sorted(stuck)[:5]} lie on a finite cycle of the successor map.")
    return Coloring(assignment=colors, palette_size=2)
