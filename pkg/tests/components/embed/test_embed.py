import itertools
from unittest.mock import MagicMock

import pytest

from src.components.canon.models import CanonicalForm
from src.components.canon.service import CanonService
from src.components.chroma.service import ChromaService
from src.components.embed.constructions import (
    embed_bounded,
    embed_intertwined,
    embed_no_order,
    embed_ordered,
    intertwined_table,
)
from src.components.embed.models import VertexMap
from src.components.embed.pipeline import pipeline_hom_to_subgraphs
from src.components.embed.service import EmbedService
from src.components.embed.verify import compose, identity_map, planted_homomorphism, verify_map
from src.components.families.service import complete_graph, edgeless_graph, shift_graph
from src.components.kernel_analysis.service import minimal_k
from src.components.tuplespace.models import IndexSet, Kernel
from src.core.config import Settings
from src.core.models.errors import (
    AllEqualKernel,
    CycleInKernel,
    EmptyKernel,
    GroundTooSmall,
    IdentityKernel,
    KTooSmall,
    NotAHomomorphism,
    NotOrderPreserving,
    WrongFamily,
)


@pytest.fixture
def settings():
    return Settings(threads=1, seed=0, verify_window=8)


@pytest.fixture
def mock_monitor():
    """Provides a mock RunMonitor."""
    return MagicMock()


@pytest.fixture
def embed(settings, mock_monitor):
    return EmbedService(settings=settings, monitor=mock_monitor)


@pytest.fixture
def canon(settings):
    return CanonService(settings=settings, monitor=MagicMock())


def _pairs(g, u):
    return [(int(v.left.number), int(v.right.number)) for v in g.vertices[u].values]


# --- verify_map ---

def test_identity_map_is_an_induced_embedding():
    report = verify_map(identity_map(shift_graph(2, 6)))
    assert report.is_homomorphism and report.is_injective and report.is_induced
    assert report.counterexamples == []


def test_constant_map_is_not_a_homomorphism():
    source = complete_graph(3)
    m = VertexMap(source=source, target=edgeless_graph(1), assignment=[0, 0, 0])
    report = verify_map(m)
    assert not report.is_homomorphism
    assert not report.is_injective
    assert report.edges_checked == 3


def test_directed_verification_needs_directed_graphs():
    with pytest.raises(ValueError):
        verify_map(identity_map(shift_graph(2, 4)), directed=True)


def test_vertex_map_json_uses_pairs():
    m = identity_map(complete_graph(3))
    dumped = m.model_dump()
    assert dumped["assignment"] == [[0, 0], [1, 1], [2, 2]]
    assert VertexMap.model_validate(dumped).assignment == [0, 1, 2]


def test_vertex_map_must_be_total():
    with pytest.raises(ValueError):
        VertexMap(source=complete_graph(3), target=complete_graph(3), assignment=[0, 1])


def test_compose_with_identity():
    m = embed_bounded([1], 4)
    assert compose(identity_map(m.source), m).assignment == m.assignment
    with pytest.raises(ValueError):
        compose(m, identity_map(complete_graph(2)))


# --- bounded glued graph ---

def test_embed_bounded_copies_coordinates():
    m = embed_bounded([1, 2], 9)
    u = next(i for i, v in enumerate(m.source.vertices) if [int(a.number) for a in v.values] == [3, 5, 8])
    assert _pairs(m.target, m.image(u)) == [(0, 3), (0, 5), (1, 3), (1, 5), (1, 8)]
    assert verify_map(m).is_embedding


def test_embed_bounded_single_block_is_an_isomorphism():
    m = embed_bounded([1], 4)
    report = verify_map(m)
    assert m.target.n == m.source.n
    assert sorted(m.assignment) == list(range(m.target.n))
    assert report.is_embedding and report.is_induced


def test_embed_bounded_three_blocks():
    assert verify_map(embed_bounded([2, 2, 1], 6)).is_embedding


def test_embed_bounded_ground_too_small():
    with pytest.raises(GroundTooSmall):
        embed_bounded([1, 3], 3)


def test_bounded_service_logs_verification(embed, mock_monitor):
    """Tests that a verified construction reports its outcome to the monitor."""
    # Arrange
    n_bar = [1, 2]

    # Act
    m = embed.bounded(n_bar, window=5)

    # Assert
    assert m.source.n == 10
    mock_monitor.log_verification.assert_called_once_with("bounded", True, {
        "source_vertices": 10,
        "target_vertices": 100,
        "edges_checked": 5,
        "n_bar": [1, 2],
        "window": 5,
    })


# --- intertwined construction ---

def test_intertwined_single_pair(embed):
    m = embed.intertwined(Kernel(pairs=[(0, 1)]), IndexSet.range(2), k=3, window=8)
    assert m.source.family.name == "rsh"
    assert verify_map(m, directed=True).is_embedding


def test_intertwined_chain(embed):
    m = embed.intertwined(Kernel(pairs=[(0, 1), (1, 2)]), IndexSet.range(3), k=4, window=8)
    assert verify_map(m, directed=True).is_embedding


def test_intertwined_with_untouched_labels(embed):
    # labels 1 and 3 lie outside Dom(f) and Rg(f)
    f = Kernel(pairs=[(0, 2), (2, 4)])
    m = embed.intertwined(f, IndexSet.range(5), window=8)
    assert verify_map(m, directed=True).is_embedding


def test_intertwined_two_generators(embed):
    f = Kernel(pairs=[(0, 1), (2, 3)])
    m = embed.intertwined(f, IndexSet.range(4), window=8)
    assert verify_map(m, directed=True).is_embedding


@pytest.mark.parametrize(
    "pairs",
    [[(0, 1)], [(0, 1), (1, 2)], [(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 2), (2, 4)]],
)
@pytest.mark.parametrize("extra", [0, 1])
def test_intertwined_keeps_every_source_vertex_apart(pairs, extra):
    """Tests that vertices differing only in trailing coordinates get distinct images."""
    # Arrange
    f = Kernel(pairs=pairs)
    k = minimal_k(f) + extra

    # Act
    m = embed_intertwined(f, IndexSet(labels=f.support), k, k + 2)
    report = verify_map(m, directed=True)

    # Assert
    assert report.is_homomorphism
    assert report.is_injective
    assert m.target.n == m.source.n


@pytest.mark.parametrize("k", [3, 4])
def test_ordered_decreasing_block_is_injective_above_minimal_k(k):
    m = embed_ordered(Kernel(pairs=[(1, 0)]), 2, k, k + 3)
    assert verify_map(m, directed=True).is_embedding


def test_intertwined_table_values_increase():
    f = Kernel(pairs=[(0, 2)])
    j = IndexSet.range(4)
    mus = [list(mu) for mu in itertools.combinations(range(6), 3)]
    for row in intertwined_table(f, j, mus):
        values = [row[label] for label in j.labels]
        assert all(a < b for a, b in zip(values, values[1:]))


def test_intertwined_reports_minimal_k():
    f = Kernel(pairs=[(0, 1), (1, 2)])
    with pytest.raises(KTooSmall) as excinfo:
        embed_intertwined(f, IndexSet.range(3), k=3, window=8)
    assert excinfo.value.minimal_k == 4


def test_intertwined_empty_kernel():
    with pytest.raises(EmptyKernel):
        embed_intertwined(Kernel(), IndexSet.range(2), k=3, window=6)


# --- kernels without order ---

def test_no_order_single_pair(embed):
    m = embed.no_order(Kernel(pairs=[(0, 1)]), IndexSet.range(2), window=6)
    assert m.source.family.name == "sh"
    assert m.source.family.params["r"] == 2
    assert verify_map(m).is_embedding


def test_no_order_with_fixed_point(embed):
    m = embed.no_order(Kernel(pairs=[(0, 0), (1, 2)]), IndexSet.range(3), window=6)
    assert verify_map(m).is_embedding


def test_no_order_unordered_kernel(embed):
    m = embed.no_order(Kernel(pairs=[(2, 0), (0, 1)]), IndexSet.range(3), window=6)
    assert m.source.family.params["r"] == 3
    assert verify_map(m).is_embedding


def test_no_order_fixed_points_only_gives_complete_graph():
    m = embed_no_order(Kernel(pairs=[(0, 0)]), IndexSet.range(2), window=5)
    assert m.source.family.params["r"] == 1
    assert len(m.source.edges) == 10
    assert verify_map(m).is_embedding


def test_no_order_refusals():
    with pytest.raises(IdentityKernel):
        embed_no_order(Kernel(pairs=[(0, 0), (1, 1)]), IndexSet.range(2), window=4)
    with pytest.raises(CycleInKernel):
        embed_no_order(Kernel(pairs=[(0, 1), (1, 0)]), IndexSet.range(2), window=4)


# --- order-preserving kernels ---

def test_ordered_decreasing(embed):
    m = embed.ordered(Kernel(pairs=[(1, 0)]), 2, k=3, window=8)
    assert verify_map(m, directed=True).is_embedding


def test_ordered_constant_block_with_free_index(embed):
    m = embed.ordered(Kernel(pairs=[(0, 0)]), 2, window=6)
    assert verify_map(m, directed=True).is_embedding


def test_ordered_mixed_blocks(embed):
    f = Kernel(pairs=[(1, 0), (2, 2), (3, 4)])
    m = embed.ordered(f, 5, window=8)
    assert verify_map(m, directed=True).is_embedding


def test_ordered_matches_intertwined_on_increasing_kernel(embed):
    f = Kernel(pairs=[(0, 1)])
    ordered = embed.ordered(f, 2, k=3, window=7)
    intertwined = embed.intertwined(f, IndexSet.range(2), k=3, window=7)
    first, second = verify_map(ordered, directed=True), verify_map(intertwined, directed=True)
    assert ordered.source.n == intertwined.source.n
    assert (first.is_embedding, first.edges_checked) == (second.is_embedding, second.edges_checked)


def test_ordered_refusals():
    with pytest.raises(IdentityKernel):
        embed_ordered(Kernel(pairs=[(0, 0), (1, 1)]), 2, k=3, window=5)
    with pytest.raises(NotOrderPreserving):
        embed_ordered(Kernel(pairs=[(0, 1), (1, 0)]), 2, k=3, window=5)
    with pytest.raises(KTooSmall):
        embed_ordered(Kernel(pairs=[(1, 0)]), 2, k=2, window=5)


# --- pipeline ---

@pytest.mark.parametrize(
    "planted",
    [s for size in range(1, 4) for s in itertools.combinations(range(3), size)],
)
def test_pipeline_recovers_planted_coordinates(canon, planted):
    t = planted_homomorphism(3, 10, planted)
    result = pipeline_hom_to_subgraphs(t, canon)
    assert result.coordinates == list(planted)
    assert result.index <= 3
    assert result.embedding.source.family.params["r"] == result.index
    report = verify_map(result.embedding)
    assert report.is_homomorphism and report.is_injective
    assert result.certified_edges == len(result.embedding.source.edges)


def test_pipeline_empty_plant_is_not_a_homomorphism():
    with pytest.raises(NotAHomomorphism):
        planted_homomorphism(3, 10, [])


def test_pipeline_last_coordinate_gives_complete_graph(canon):
    result = pipeline_hom_to_subgraphs(planted_homomorphism(2, 8, [1]), canon)
    assert result.coordinates == [1]
    assert result.index == 1
    assert len(result.embedding.source.edges) == result.window * (result.window - 1) // 2


def test_pipeline_identity_reembeds_sh2(canon):
    result = pipeline_hom_to_subgraphs(identity_map(shift_graph(2, 8)), canon)
    assert result.coordinates == [0, 1]
    assert result.index == 2
    assert verify_map(result.embedding).is_embedding


def test_pipeline_split_coordinates(canon):
    result = pipeline_hom_to_subgraphs(planted_homomorphism(3, 10, [0, 2]), canon)
    assert result.index == 1
    assert result.copy_window[0] <= 0


def test_pipeline_rejects_other_sources(canon):
    with pytest.raises(WrongFamily):
        pipeline_hom_to_subgraphs(identity_map(complete_graph(4)), canon)


def test_pipeline_rejects_non_homomorphisms(canon):
    source = shift_graph(2, 5)
    t = VertexMap(source=source, target=edgeless_graph(1), assignment=[0] * source.n)
    with pytest.raises(NotAHomomorphism):
        pipeline_hom_to_subgraphs(t, canon)


def test_pipeline_service_logs(embed, canon, mock_monitor):
    result = embed.pipeline(planted_homomorphism(3, 10, [0, 1]), canon)
    mock_monitor.log_verification.assert_called_once_with("pipeline", True, {
        "index": result.index,
        "coordinates": [0, 1],
        "certified_edges": result.certified_edges,
    })


def test_all_equal_kernel_is_refused():
    canon = MagicMock()
    canon.canonize.return_value = CanonicalForm(N=list(range(8)), S=[])
    with pytest.raises(AllEqualKernel):
        pipeline_hom_to_subgraphs(identity_map(shift_graph(2, 8)), canon)


# --- randomized soundness and chromatic transfer ---

def test_soundness_sweep_has_no_failures(embed, mock_monitor):
    outcomes = embed.soundness_sweep(200, seed=0)
    failures = [o for o in outcomes if not o.passed]
    assert failures == []
    assert {o.construction for o in outcomes} == {"bounded", "intertwined", "no-order", "ordered"}
    mock_monitor.log_event.assert_called_once_with("soundness_sweep", {
        "samples": 200, "seed": 0, "checks": len(outcomes), "failures": 0,
    })


def test_soundness_sweep_is_reproducible(embed):
    first = embed.soundness_sweep(5, seed=3)
    second = embed.soundness_sweep(5, seed=3)
    assert [o.kernel for o in first] == [o.kernel for o in second]


def test_chromatic_number_transfers_along_embeddings(settings, canon):
    chroma = ChromaService(settings=settings, monitor=MagicMock())
    maps = [pipeline_hom_to_subgraphs(planted_homomorphism(3, 10, s), canon).embedding for s in ([0, 1], [1, 2], [0])]
    maps.append(embed_bounded([1, 2], 5))
    for m in maps:
        assert m.target.n <= 120
        assert chroma.chi_exact(m.source).chi <= chroma.chi_exact(m.target).chi
