import itertools
import math

import pytest
from pydantic import ValidationError

from src.components.families.models import Graph
from src.components.families.service import (
    bounded_glued,
    complete_graph,
    cycle_graph,
    cyclic_sym,
    directed_shift,
    edgeless_graph,
    glued_blocks,
    graph_from_kernel,
    image_graph,
    kernel_graph_on,
    random_graph,
    shift_graph,
)
from src.components.tuplespace.models import IndexSet, Kernel
from src.components.tuplespace.service import enumerate_tuples, int_tuple, integer_range, kernel_of, restrict
from src.core.models.errors import GroundTooSmall, IdentityKernel, IndexMismatch, NotAHomomorphism
from src.core.models.ontology import Side


def _values(g, u):
    return tuple(int(v.number) for v in g.vertices[u].values)


@pytest.mark.parametrize("r,n", [(2, 4), (2, 8), (3, 6), (4, 7)])
def test_shift_graph_sizes(r, n):
    g = shift_graph(r, n)
    assert g.n == math.comb(n, r)
    # every edge extends an increasing (r+1)-tuple
    assert len(g.edges) == math.comb(n, r + 1)


def test_sh2_4_matches_the_worked_example():
    g = shift_graph(2, 4)
    assert g.n == 6
    named = {(_values(g, u), _values(g, v)) for u, v in g.edges}
    assert ((0, 1), (1, 2)) in named
    assert ((0, 1), (1, 3)) in named
    assert not any({a, b} == {(0, 1), (2, 3)} for a, b in named)


def test_sh1_is_complete():
    g = shift_graph(1, 5)
    assert len(g.edges) == 10


def test_symmetric_shift_graph_uses_containment():
    g = shift_graph(2, 3, symmetric=True)
    assert g.n == 6
    named = {frozenset((_values(g, u), _values(g, v))) for u, v in g.edges}
    assert frozenset({(0, 1), (1, 0)}) in named
    assert frozenset({(2, 1), (1, 0)}) in named


def test_shift_graph_needs_room():
    with pytest.raises(GroundTooSmall):
        shift_graph(4, 3)


def test_directed_shifts_are_reverse_of_each_other():
    left = directed_shift(3, 5, Side.LEFT)
    right = directed_shift(3, 5, Side.RIGHT)
    assert left.arc_set == frozenset((v, u) for u, v in right.arc_set)
    assert left.edge_set == shift_graph(3, 5).edge_set


def test_right_shift_orientation():
    g = directed_shift(2, 4, Side.RIGHT)
    for u, v in g.directed_edges:
        assert _values(g, u)[0] == _values(g, v)[1]


def test_cyclic_sym_rotation_edges():
    g = cyclic_sym(3, 3)
    assert g.n == 6
    assert sorted(len(c) for c in g.components()) == [3, 3]


def test_cyclic_sym_needs_length_two():
    with pytest.raises(ValueError):
        cyclic_sym(1, 3)


def test_bounded_glued_edges():
    g = bounded_glued([1, 2], 5)
    assert g.n == math.comb(5, 2) * math.comb(5, 3)
    for u, v in g.edges[:50]:
        a, b = glued_blocks(g.vertices[u], [1, 2]), glued_blocks(g.vertices[v], [1, 2])
        forward = all(x[:-1] == y[1:] for x, y in zip(a, b))
        backward = all(y[:-1] == x[1:] for x, y in zip(a, b))
        assert forward or backward


def test_bounded_glued_single_block_is_the_shift_graph():
    assert len(bounded_glued([1], 4).edges) == len(shift_graph(2, 4).edges)


def test_bounded_glued_ground_too_small():
    with pytest.raises(GroundTooSmall):
        bounded_glued([2, 3], 3)


def test_graph_from_kernel_exact_equality():
    """E_f for f={(1,0)} on increasing pairs is Sh_2."""
    f = Kernel(pairs=[(1, 0)])
    g = graph_from_kernel(integer_range(5), IndexSet.range(2), f, increasing=True)
    assert g.edge_set == shift_graph(2, 5).edge_set
    for u, v in g.edges:
        assert kernel_of(g.vertices[u], g.vertices[v]) == f or kernel_of(g.vertices[v], g.vertices[u]) == f


def test_graph_from_kernel_directed_arcs_carry_the_kernel():
    f = Kernel(pairs=[(0, 1)])
    g = graph_from_kernel(integer_range(4), IndexSet.range(2), f, increasing=False, directed=True)
    assert g.is_directed
    for u, v in g.directed_edges:
        assert kernel_of(g.vertices[u], g.vertices[v]) == f


def test_empty_kernel_gives_disjointness_graph():
    g = graph_from_kernel(integer_range(4), IndexSet.range(2), Kernel(), increasing=True)
    for u, v in g.edges:
        assert not set(g.vertices[u].values) & set(g.vertices[v].values)
    assert len(g.edges) == 3


def _partial_injections(r):
    for size in range(r + 1):
        for domain in itertools.combinations(range(r), size):
            for image in itertools.permutations(range(r), size):
                yield Kernel(pairs=list(zip(domain, image)))


@pytest.mark.parametrize("increasing", [True, False])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_graph_from_kernel_matches_kernel_of_exhaustively(r, increasing):
    """Every arc of D_f has kernel f, and every pair with kernel f is an arc."""
    j = IndexSet.range(r)
    for n in range(r, 6):
        ground = integer_range(n)
        by_kernel = {}
        for s, t in itertools.permutations(list(enumerate_tuples(ground, j, increasing)), 2):
            by_kernel.setdefault(kernel_of(s, t).pairs, set()).add((s, t))
        for f in _partial_injections(r):
            if f.is_identity_on(j):
                continue
            g = graph_from_kernel(ground, j, f, increasing=increasing, directed=True)
            arcs = {(g.vertices[u], g.vertices[v]) for u, v in g.directed_edges}
            assert arcs == by_kernel.get(f.pairs, set()), (n, f)
            assert set(g.edges) == {(min(u, v), max(u, v)) for u, v in g.directed_edges}


def test_fixed_point_kernel_gives_triangles():
    """f={(0,0)} on injective pairs over 4 elements: same first value, different second."""
    g = graph_from_kernel(integer_range(4), IndexSet.range(2), Kernel(pairs=[(0, 0)]), increasing=False)
    components = g.components()
    assert len(components) == 4
    for component in components:
        assert len(component) == 3
        assert len({_values(g, u)[0] for u in component}) == 1
        assert all(g.has_edge(u, v) for u, v in itertools.combinations(component, 2))
    assert len(g.edges) == 12


def test_identity_kernel_is_refused():
    with pytest.raises(IdentityKernel):
        graph_from_kernel(integer_range(4), IndexSet.range(2), Kernel(pairs=[(0, 0), (1, 1)]), increasing=True)


def test_kernel_labels_must_fit():
    with pytest.raises(IndexMismatch):
        graph_from_kernel(integer_range(4), IndexSet.range(2), Kernel(pairs=[(0, 3)]), increasing=True)


def test_kernel_graph_on_explicit_vertices():
    vertices = [int_tuple([0, 1]), int_tuple([1, 2]), int_tuple([5, 6])]
    g = kernel_graph_on(vertices, Kernel(pairs=[(1, 0)]), directed=True)
    assert g.directed_edges == ((0, 1),)


def test_image_graph_plants_a_homomorphism():
    source = shift_graph(3, 6)
    target, assignment = image_graph(source, lambda t: restrict(t, [0, 2]))
    for u, v in source.edges:
        assert target.has_edge(assignment[u], assignment[v])


def test_image_graph_rejects_collapsed_edges():
    with pytest.raises(NotAHomomorphism):
        image_graph(shift_graph(2, 4), lambda t: restrict(t, []))


def test_standard_families():
    assert len(complete_graph(5).edges) == 10
    assert len(cycle_graph(5).edges) == 5
    assert edgeless_graph(3).edges == ()
    assert random_graph(10, 0.5, seed=3) == random_graph(10, 0.5, seed=3)


def test_graph_rejects_bad_edges():
    vertices = (int_tuple([0]), int_tuple([1]))
    with pytest.raises(ValidationError):
        Graph(vertices=vertices, edges=((1, 0),))
    with pytest.raises(ValidationError):
        Graph(vertices=vertices, edges=((0, 1),), directed_edges=((0, 0),))


def test_graph_json_round_trip_is_stable():
    g = shift_graph(2, 5)
    again = Graph.model_validate(g.model_dump(mode="json"))
    assert again == g
    assert again.model_dump(mode="json") == g.model_dump(mode="json")


def test_to_networkx_and_components():
    g = shift_graph(2, 5)
    nxg = g.to_networkx()
    assert nxg.number_of_nodes() == 10 and nxg.number_of_edges() == 10
    # (0, 4) has no successor and no predecessor
    assert [g.index_of(int_tuple([0, 4], increasing=True))] in g.components()
    assert sorted(itertools.chain.from_iterable(g.components())) == list(range(g.n))


@pytest.mark.parametrize("r,n", [(2, 5), (2, 8), (3, 6), (3, 7), (4, 8)])
def test_isolated_shift_vertices_touch_both_window_ends(r, n):
    g = shift_graph(r, n)
    degree = g.to_networkx().degree
    isolated = {u for u in range(g.n) if degree[u] == 0}
    assert isolated == {u for u in range(g.n) if _values(g, u)[0] == 0 and _values(g, u)[-1] == n - 1}


@pytest.mark.parametrize("r,n", [(2, 4), (2, 7), (3, 6), (3, 8), (4, 8), (4, 10)])
def test_vertices_clear_of_one_window_end_share_a_component(r, n):
    g = shift_graph(r, n)
    bottom = g.index_of(int_tuple(range(r), increasing=True))
    (component,) = [c for c in g.components() if bottom in c]
    assert g.index_of(int_tuple(range(n - r, n), increasing=True)) in component
    for u in range(g.n):
        values = _values(g, u)
        if values[-1] <= n - 1 - r or values[0] >= r:
            assert u in component


def test_finite_shift_windows_split_into_several_components():
    g = shift_graph(3, 7)
    pair = sorted(g.index_of(int_tuple(t, increasing=True)) for t in ([0, 1, 5], [1, 5, 6]))
    assert pair in g.components()
    assert len(g.components()) > 1
