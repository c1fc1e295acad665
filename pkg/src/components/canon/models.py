# src/components/canon/models.py

from typing import Callable, Hashable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

IntTuple = Tuple[int, ...]


class RelationOracle(BaseModel):
    """
    An equivalence relation on increasing `arity`-tuples over range(ground). Key-based
    oracles (two tuples are related iff their keys match) are equivalences by construction;
    predicate-based ones are checked before use.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str = "relation"
    arity: int = Field(ge=1)
    ground: int = Field(ge=1)
    key: Optional[Callable[[IntTuple], Hashable]] = None
    predicate: Optional[Callable[[IntTuple, IntTuple], bool]] = None

    @model_validator(mode="after")
    def _check_callable(self) -> "RelationOracle":
        if (self.key is None) == (self.predicate is None):
            raise ValueError("An oracle takes exactly one of `key` or `predicate`.")
        return self

    @property
    def is_keyed(self) -> bool:
        return self.key is not None

    def same(self, a: IntTuple, b: IntTuple) -> bool:
        if self.key is not None:
            return self.key(a) == self.key(b)
        return bool(self.predicate(a, b))


class IntervalStructure(BaseModel):
    """Maximal runs [i_j, i_j + n_j] of a nonempty coordinate set, in increasing order."""
    starts: List[int]
    lengths: List[int]

    @property
    def intervals(self) -> List[Tuple[int, int]]:
        return [(i, i + n) for i, n in zip(self.starts, self.lengths)]

    @property
    def count(self) -> int:
        return len(self.starts)

    @property
    def max_length(self) -> int:
        return max(self.lengths)


class CanonicalForm(BaseModel):
    """
    A ground subset N and coordinate set S such that two increasing tuples over N are
    related exactly when they agree on S.
    """
    N: List[int]
    S: List[int]
    intervals: Optional[IntervalStructure] = None
    nodes_explored: int = 0


class EquivalenceCheck(BaseModel):
    exhaustive: bool
    checked: int
