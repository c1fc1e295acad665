# src/components/canon/service.py

import itertools
import logging
import random
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from src.core.config import Settings
from src.core.models.errors import EmptyS, NotEquivalence
from src.core.monitoring.service import RunMonitor

from .models import CanonicalForm, EquivalenceCheck, IntervalStructure, IntTuple, RelationOracle

logger = logging.getLogger(__name__)


# --- Built-in oracles ---

def coordinate_oracle(arity: int, ground: int, coordinates: Iterable[int]) -> RelationOracle:
    """Tuples are related when they agree on `coordinates`."""
    coordinates = sorted(set(coordinates))
    if any(not 0 <= c < arity for c in coordinates):
        raise ValueError(f"Coordinates {coordinates} fall outside [0, {arity}).")
    return RelationOracle(
        name=f"coordinates{coordinates}",
        arity=arity,
        ground=ground,
        key=lambda a: tuple(a[c] for c in coordinates),
    )


def sum_oracle(ground: int) -> RelationOracle:
    return RelationOracle(name="sum", arity=2, ground=ground, key=lambda a: a[0] + a[1])


def constant_oracle(arity: int, ground: int) -> RelationOracle:
    return RelationOracle(name="constant", arity=arity, ground=ground, key=lambda a: 0)


def partition_oracle(arity: int, ground: int, classes: Dict[IntTuple, Hashable]) -> RelationOracle:
    """An explicit partition of the increasing tuples into labelled classes."""
    classes = {tuple(t): label for t, label in classes.items()}
    missing = [t for t in itertools.combinations(range(ground), arity) if t not in classes]
    if missing:
        raise ValueError(f"The partition leaves {len(missing)} tuples unclassified, e.g. {missing[0]}.")
    return RelationOracle(name="partition", arity=arity, ground=ground, key=lambda a: classes[a])


def interval_structure(coordinates: Sequence[int]) -> IntervalStructure:
    s = sorted(set(coordinates))
    if not s:
        raise EmptyS("The coordinate set is empty; every tuple would be related.")
    starts, lengths = [s[0]], [0]
    for c in s[1:]:
        if c == starts[-1] + lengths[-1] + 1:
            lengths[-1] += 1
        else:
            starts.append(c)
            lengths.append(0)
    return IntervalStructure(starts=starts, lengths=lengths)


def is_sidon(values: Iterable[int]) -> bool:
    """Sums of two distinct elements are pairwise distinct."""
    sums = [a + b for a, b in itertools.combinations(sorted(set(values)), 2)]
    return len(sums) == len(set(sums))


def verify_canonical_form(oracle: RelationOracle, form: CanonicalForm, limit: int = 10) -> List[Tuple[IntTuple, IntTuple]]:
    """Pairs of increasing tuples over N where the relation and S-agreement disagree."""
    tuples = list(itertools.combinations(sorted(form.N), oracle.arity))
    bad = []
    for a, b in itertools.combinations_with_replacement(tuples, 2):
        agree = all(a[c] == b[c] for c in form.S)
        if oracle.same(a, b) != agree:
            bad.append((a, b))
            if len(bad) >= limit:
                break
    return bad


# --- Search ---

class _BudgetExceeded(Exception):
    pass


class _CanonSearch:
    """
    Depth-first growth of N, smallest elements first. Every admitted tuple is compared
    with one representative per S-projection class.
    """
    def __init__(self, oracle: RelationOracle, coordinates: Tuple[int, ...], target: int, node_budget: int):
        self.oracle = oracle
        self.coordinates = coordinates
        self.target = target
        self.node_budget = node_budget
        self.nodes = 0
        self.chosen: List[int] = []
        self.representative: Dict[IntTuple, IntTuple] = {}
        self.class_size: Dict[IntTuple, int] = {}
        self.projection_of_key: Dict[Hashable, IntTuple] = {}

    def _project(self, t: IntTuple) -> IntTuple:
        return tuple(t[c] for c in self.coordinates)

    def _consistent(self, t: IntTuple, projection: IntTuple) -> bool:
        if self.oracle.is_keyed:
            owner = self.projection_of_key.get(self.oracle.key(t))
            if owner is not None:
                return owner == projection
            return projection not in self.representative
        for other, rep in self.representative.items():
            if self.oracle.same(t, rep) != (other == projection):
                return False
        return True

    def _admit(self, t: IntTuple, projection: IntTuple):
        if projection not in self.representative:
            self.representative[projection] = t
            self.class_size[projection] = 0
            if self.oracle.is_keyed:
                self.projection_of_key[self.oracle.key(t)] = projection
        self.class_size[projection] += 1

    def _retract(self, projection: IntTuple):
        self.class_size[projection] -= 1
        if self.class_size[projection] == 0:
            rep = self.representative.pop(projection)
            del self.class_size[projection]
            if self.oracle.is_keyed:
                del self.projection_of_key[self.oracle.key(rep)]

    def _extend(self, x: int) -> Optional[List[IntTuple]]:
        admitted = []
        for head in itertools.combinations(self.chosen, self.oracle.arity - 1):
            t = head + (x,)
            projection = self._project(t)
            if not self._consistent(t, projection):
                for undo in reversed(admitted):
                    self._retract(undo)
                return None
            self._admit(t, projection)
            admitted.append(projection)
        return admitted

    def grow(self) -> bool:
        if len(self.chosen) == self.target:
            return True
        start = self.chosen[-1] + 1 if self.chosen else 0
        last = self.oracle.ground - (self.target - len(self.chosen))
        for x in range(start, last + 1):
            self.nodes += 1
            if self.nodes > self.node_budget:
                raise _BudgetExceeded()
            admitted = self._extend(x)
            if admitted is None:
                continue
            self.chosen.append(x)
            if self.grow():
                return True
            self.chosen.pop()
            for projection in reversed(admitted):
                self._retract(projection)
        return False


class CanonService:
    """
    Finds a ground subset on which a relation on increasing tuples is decided by
    agreement on a fixed set of coordinates.
    """
    def __init__(self, settings: Settings, monitor: RunMonitor):
        self.settings = settings
        self.monitor = monitor
        logger.info("CanonService initialized.")

    def check_equivalence(self, oracle: RelationOracle) -> EquivalenceCheck:
        """
        Exhaustive reflexivity, symmetry and transitivity on small grounds, random triples
        otherwise. Raises NotEquivalence with the offending tuples.
        """
        tuples = list(itertools.combinations(range(oracle.ground), oracle.arity))
        if oracle.ground <= self.settings.canon_exhaustive_limit:
            related = {a: frozenset(b for b in tuples if oracle.same(a, b)) for a in tuples}
            for a in tuples:
                if a not in related[a]:
                    raise NotEquivalence(f"{a} is not related to itself.", witness=[a])
                for b in related[a]:
                    if a not in related[b]:
                        raise NotEquivalence(f"{a} ~ {b} but not {b} ~ {a}.", witness=[a, b])
                    if related[a] != related[b]:
                        c = min(related[a] ^ related[b])
                        raise NotEquivalence(f"Transitivity fails through {a}, {b}, {c}.", witness=[a, b, c])
            return EquivalenceCheck(exhaustive=True, checked=len(tuples) ** 2)

        rng = random.Random(self.settings.seed)
        for _ in range(self.settings.canon_sample_triples):
            a, b, c = (tuple(sorted(rng.sample(range(oracle.ground), oracle.arity))) for _ in range(3))
            if not oracle.same(a, a):
                raise NotEquivalence(f"{a} is not related to itself.", witness=[a])
            if oracle.same(a, b) != oracle.same(b, a):
                raise NotEquivalence(f"Symmetry fails on {a}, {b}.", witness=[a, b])
            if oracle.same(a, b) and oracle.same(b, c) and not oracle.same(a, c):
                raise NotEquivalence(f"Transitivity fails through {a}, {b}, {c}.", witness=[a, b, c])
        return EquivalenceCheck(exhaustive=False, checked=self.settings.canon_sample_triples)

    def canonize(self, oracle: RelationOracle, target: int) -> Optional[CanonicalForm]:
        """
        Try coordinate sets by size and then lexicographically; for each, grow N greedily
        with backtracking. Returns None when no S admits an N of the target size.
        """
        if not oracle.arity + 1 <= target <= oracle.ground:
            raise ValueError(f"Target size must lie in [{oracle.arity + 1}, {oracle.ground}], got {target}.")
        if not oracle.is_keyed:
            self.check_equivalence(oracle)

        explored = 0
        for size in range(oracle.arity + 1):
            for coordinates in itertools.combinations(range(oracle.arity), size):
                search = _CanonSearch(oracle, coordinates, target, self.settings.canon_node_budget)
                try:
                    found = search.grow()
                except _BudgetExceeded:
                    logger.debug(f"S={list(coordinates)} exhausted the node budget.")
                    found = False
                explored += search.nodes
                if found:
                    form = CanonicalForm(
                        N=list(search.chosen),
                        S=list(coordinates),
                        intervals=interval_structure(coordinates) if coordinates else None,
                        nodes_explored=explored,
                    )
                    self.monitor.log_event("canonization", {
                        "oracle": oracle.name, "target": target, "found": True,
                        "coordinates": form.S, "nodes_explored": explored,
                    })
                    return form

        self.monitor.log_event("canonization", {
            "oracle": oracle.name, "target": target, "found": False, "nodes_explored": explored,
        })
        logger.info(f"No canonical form of size {target} for {oracle.name} within the node budget.")
        return None
