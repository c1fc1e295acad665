import itertools
from unittest.mock import MagicMock

import pytest
from hypothesis import given, strategies as st

from src.components.canon.models import RelationOracle
from src.components.canon.service import (
    CanonService,
    constant_oracle,
    coordinate_oracle,
    interval_structure,
    is_sidon,
    partition_oracle,
    sum_oracle,
    verify_canonical_form,
)
from src.core.config import Settings
from src.core.models.errors import EmptyS, NotEquivalence


@pytest.fixture
def mock_monitor():
    """Provides a mock RunMonitor."""
    return MagicMock()


@pytest.fixture
def canon(mock_monitor):
    return CanonService(settings=Settings(seed=0), monitor=mock_monitor)


# --- interval structure ---

@pytest.mark.parametrize(
    "coordinates,intervals,lengths",
    [
        ([0, 1, 2], [(0, 2)], [2]),
        ([0, 2], [(0, 0), (2, 2)], [0, 0]),
        ([1, 2, 4, 5, 6], [(1, 2), (4, 6)], [1, 2]),
    ],
)
def test_interval_structure_examples(coordinates, intervals, lengths):
    structure = interval_structure(coordinates)
    assert structure.intervals == intervals
    assert structure.lengths == lengths
    assert structure.count == len(intervals)


def test_interval_structure_of_empty_set():
    with pytest.raises(EmptyS):
        interval_structure([])


@given(st.sets(st.integers(min_value=0, max_value=12), min_size=1))
def test_intervals_rebuild_the_coordinate_set(coordinates):
    structure = interval_structure(coordinates)
    rebuilt = [c for lo, hi in structure.intervals for c in range(lo, hi + 1)]
    assert rebuilt == sorted(coordinates)
    # maximal: consecutive intervals never touch
    assert all(b[0] > a[1] + 1 for a, b in zip(structure.intervals, structure.intervals[1:]))


# --- oracles ---

def test_oracle_needs_exactly_one_callable():
    with pytest.raises(ValueError):
        RelationOracle(arity=2, ground=4)
    with pytest.raises(ValueError):
        RelationOracle(arity=2, ground=4, key=lambda a: a, predicate=lambda a, b: True)


def test_partition_oracle_must_cover_every_tuple():
    with pytest.raises(ValueError):
        partition_oracle(2, 4, {(0, 1): "a"})


def test_is_sidon():
    assert is_sidon([0, 1, 3, 7])
    assert not is_sidon([0, 1, 2, 3])


# --- equivalence check ---

def test_exhaustive_equivalence_check(canon):
    oracle = RelationOracle(arity=2, ground=6, predicate=lambda a, b: a[0] == b[0])
    check = canon.check_equivalence(oracle)
    assert check.exhaustive
    assert check.checked == 15 * 15


def test_sampled_equivalence_check(canon):
    oracle = RelationOracle(arity=2, ground=12, predicate=lambda a, b: a[1] == b[1])
    check = canon.check_equivalence(oracle)
    assert not check.exhaustive
    assert check.checked == 1000


@pytest.mark.parametrize(
    "predicate",
    [
        lambda a, b: abs(a[0] - b[0]) <= 1,
        lambda a, b: a != b,
        lambda a, b: a[0] <= b[0],
    ],
)
def test_non_equivalences_are_refused(canon, predicate):
    oracle = RelationOracle(arity=2, ground=6, predicate=predicate)
    with pytest.raises(NotEquivalence) as excinfo:
        canon.check_equivalence(oracle)
    assert excinfo.value.witness


def test_canonize_checks_predicate_oracles(canon):
    oracle = RelationOracle(arity=2, ground=6, predicate=lambda a, b: abs(a[0] - b[0]) <= 1)
    with pytest.raises(NotEquivalence):
        canon.canonize(oracle, 4)


# --- canonization ---

def test_first_coordinate_is_already_canonical(canon):
    form = canon.canonize(coordinate_oracle(2, 10, [0]), 10)
    assert form.S == [0]
    assert form.N == list(range(10))
    assert form.intervals.intervals == [(0, 0)]


def test_constant_relation_has_empty_coordinate_set(canon):
    form = canon.canonize(constant_oracle(3, 9), 9)
    assert form.S == []
    assert form.N == list(range(9))
    assert form.intervals is None


def test_sum_relation_finds_sidon_set(canon, mock_monitor):
    """Tests that the pair-sum relation canonizes on a Sidon set and logs the search."""
    # Arrange
    oracle = sum_oracle(12)

    # Act
    form = canon.canonize(oracle, 4)

    # Assert
    assert form.S == [0, 1]
    assert len(form.N) == 4
    assert is_sidon(form.N)
    assert verify_canonical_form(oracle, form) == []
    mock_monitor.log_event.assert_called_once_with("canonization", {
        "oracle": "sum",
        "target": 4,
        "found": True,
        "coordinates": [0, 1],
        "nodes_explored": form.nodes_explored,
    })


@pytest.mark.parametrize("arity", [1, 2, 3, 4])
@pytest.mark.parametrize("ground", [8, 10])
def test_planted_coordinates_are_recovered(canon, arity, ground):
    for size in range(arity + 1):
        for planted in itertools.combinations(range(arity), size):
            oracle = coordinate_oracle(arity, ground, planted)
            form = canon.canonize(oracle, ground)
            assert form.S == list(planted)
            assert form.N == list(range(ground))


@pytest.mark.parametrize("arity", [1, 2, 3])
def test_returned_forms_hold_on_every_pair(canon, arity):
    for planted in itertools.chain.from_iterable(itertools.combinations(range(arity), s) for s in range(arity + 1)):
        oracle = coordinate_oracle(arity, 8, planted)
        form = canon.canonize(oracle, 6)
        assert verify_canonical_form(oracle, form) == []


def test_predicate_oracle_canonizes(canon):
    oracle = RelationOracle(arity=2, ground=10, predicate=lambda a, b: a[0] == b[0])
    form = canon.canonize(oracle, 10)
    assert form.S == [0]


def test_partition_oracle_canonizes(canon):
    classes = {t: t[1] % 7 for t in itertools.combinations(range(7), 2)}
    form = canon.canonize(partition_oracle(2, 7, classes), 5)
    assert form.S == [1]
    assert verify_canonical_form(partition_oracle(2, 7, classes), form) == []


def test_node_budget_turns_search_into_not_found(mock_monitor):
    service = CanonService(settings=Settings(canon_node_budget=1), monitor=mock_monitor)
    assert service.canonize(sum_oracle(12), 4) is None
    event, data = mock_monitor.log_event.call_args.args
    assert event == "canonization"
    assert data["found"] is False


def test_target_outside_range(canon):
    with pytest.raises(ValueError):
        canon.canonize(sum_oracle(6), 2)
    with pytest.raises(ValueError):
        canon.canonize(sum_oracle(6), 7)
