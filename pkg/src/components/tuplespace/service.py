# src/components/tuplespace/service.py

import itertools
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

from .models import (
    AtomKind,
    GroundAtom,
    GroundDescriptor,
    GroundSet,
    IndexSet,
    InjectiveTuple,
    Kernel,
    Label,
)

logger = logging.getLogger(__name__)

NEG = GroundAtom(kind=AtomKind.NEG)


# --- Atom constructors ---

@lru_cache(maxsize=None)
def int_atom(value: int) -> GroundAtom:
    return GroundAtom(kind=AtomKind.INT, number=Fraction(value))


def rat_atom(value) -> GroundAtom:
    value = Fraction(value)
    if value.denominator == 1:
        return int_atom(value.numerator)
    return GroundAtom(kind=AtomKind.RAT, number=value)


def pair_atom(left: GroundAtom, right: GroundAtom) -> GroundAtom:
    return GroundAtom(kind=AtomKind.PAIR, left=left, right=right)


def tagged_atom(tag: str, *payload: GroundAtom) -> GroundAtom:
    return GroundAtom(kind=AtomKind.TAGGED, tag=tag, payload=tuple(payload))


# --- Ground sets ---

def integer_range(n: int, start: int = 0) -> GroundSet:
    return GroundSet(
        atoms=tuple(int_atom(v) for v in range(start, start + n)),
        descriptor=GroundDescriptor(kind="range", params={"n": n, "start": start}),
    )


def window(lo: int, hi: int) -> GroundSet:
    """The integer window [lo, hi], both ends included."""
    return GroundSet(
        atoms=tuple(int_atom(v) for v in range(lo, hi + 1)),
        descriptor=GroundDescriptor(kind="window", params={"lo": lo, "hi": hi}),
    )


def from_atoms(atoms: Iterable[GroundAtom]) -> GroundSet:
    return GroundSet(atoms=tuple(sorted(set(atoms))), descriptor=GroundDescriptor(kind="explicit"))


def tagged(tag: str, payloads: Iterable[Sequence[GroundAtom]]) -> GroundSet:
    """Symbolic atoms Tagged(tag, payload), ordered by payload."""
    return GroundSet(
        atoms=tuple(sorted({tagged_atom(tag, *payload) for payload in payloads})),
        descriptor=GroundDescriptor(kind="tagged", params={"tag": tag}),
    )


def lex_product(outer: GroundSet, inner: GroundSet) -> GroundSet:
    """All Pair(o, i) with the outer coordinate most significant."""
    if not outer.atoms or not inner.atoms:
        raise ValueError("Lexicographic products need two nonempty factors.")
    return GroundSet(
        atoms=tuple(pair_atom(o, i) for o in outer.atoms for i in inner.atoms),
        descriptor=GroundDescriptor(
            kind="lex",
            params={"outer": outer.descriptor.model_dump(), "inner": inner.descriptor.model_dump()},
        ),
    )


def reverse(ground: GroundSet) -> GroundSet:
    """Same atoms, inverted order. Reversing a reversed set restores its original descriptor."""
    if ground.descriptor.kind == "reversed":
        original = GroundDescriptor.model_validate(ground.descriptor.params["of"])
        return GroundSet(atoms=tuple(reversed(ground.atoms)), descriptor=original)
    return GroundSet(
        atoms=tuple(reversed(ground.atoms)),
        descriptor=GroundDescriptor(kind="reversed", params={"of": ground.descriptor.model_dump()}),
    )


def with_sentinel(ground: GroundSet) -> GroundSet:
    """Adjoin Neg below every atom of the ground set."""
    if NEG in ground:
        raise ValueError("The ground set already holds the sentinel.")
    return GroundSet(
        atoms=(NEG,) + ground.atoms,
        descriptor=GroundDescriptor(kind="sentinel", params={"of": ground.descriptor.model_dump()}),
    )


def order_isomorphism(source: GroundSet, target: GroundSet) -> Dict[GroundAtom, GroundAtom]:
    if source.size != target.size:
        raise ValueError(f"Order isomorphism needs equal sizes, got {source.size} and {target.size}.")
    return dict(zip(source.atoms, target.atoms))


def initial_segment(ground: GroundSet, k: int) -> List[GroundAtom]:
    return list(ground.atoms[:k])


# --- Tuples and kernels ---

def enumerate_tuples(ground: GroundSet, j: IndexSet, increasing: bool) -> Iterator[InjectiveTuple]:
    """
    Yield every injective (or strictly increasing) tuple from j into the ground set, in
    lexicographic order of the value sequences under the ground set's declared order.
    """
    choose = itertools.combinations if increasing else itertools.permutations
    for values in choose(ground.atoms, j.size):
        yield InjectiveTuple(index=j, values=values, increasing=increasing)


def make_tuple(values: Sequence[GroundAtom], increasing: bool = False, index: IndexSet = None) -> InjectiveTuple:
    return InjectiveTuple(index=index or IndexSet.range(len(values)), values=tuple(values), increasing=increasing)


def int_tuple(values: Sequence[int], increasing: bool = False) -> InjectiveTuple:
    return make_tuple([int_atom(v) for v in values], increasing=increasing)


def kernel_pairs(a: InjectiveTuple, b: InjectiveTuple) -> FrozenSet[Tuple[Label, Label]]:
    position_in_b = {value: label for label, value in zip(b.index.labels, b.values)}
    return frozenset(
        (label, position_in_b[value])
        for label, value in zip(a.index.labels, a.values)
        if value in position_in_b
    )


def kernel_of(a: InjectiveTuple, b: InjectiveTuple) -> Kernel:
    """f_{a,b} = {(i, j) : a_i = b_j}."""
    return Kernel(pairs=kernel_pairs(a, b))


def is_increasing(t: InjectiveTuple, ground: GroundSet) -> bool:
    ranks = [ground.rank(value) for value in t.values]
    return all(lower < upper for lower, upper in zip(ranks, ranks[1:]))


def restrict(t: InjectiveTuple, labels: Iterable) -> InjectiveTuple:
    keep = IndexSet(labels=sorted(set(labels)))
    return InjectiveTuple(index=keep, values=tuple(t.value_of(label) for label in keep.labels), increasing=t.increasing)


def falling_factorial(n: int, k: int) -> int:
    return math.perm(n, k) if k <= n else 0


def binomial(n: int, k: int) -> int:
    return math.comb(n, k)
