# src/components/tuplespace/models.py

from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Annotated, Any, Dict, FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, model_serializer, model_validator

Label = Fraction


def as_label(raw: Any) -> Label:
    """Index labels are integers or exact rationals; JSON carries rationals as [p, q]."""
    if isinstance(raw, Fraction):
        return raw
    if isinstance(raw, bool):
        raise ValueError("Booleans are not index labels.")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, (list, tuple)) and len(raw) == 2:
        return Fraction(int(raw[0]), int(raw[1]))
    if isinstance(raw, str):
        return Fraction(raw)
    raise ValueError(f"Cannot read {raw!r} as an index label.")


def label_to_json(label: Label) -> Any:
    if label.denominator == 1:
        return label.numerator
    return [label.numerator, label.denominator]


# Label-valued pydantic fields: exact rationals in memory, ints or [p, q] in JSON.
LabelField = Annotated[Fraction, BeforeValidator(as_label), PlainSerializer(label_to_json)]


class AtomKind(str, Enum):
    NEG = "neg"
    INT = "int"
    RAT = "rat"
    PAIR = "pair"
    TAGGED = "tag"


_KIND_RANK = {AtomKind.NEG: 0, AtomKind.INT: 1, AtomKind.RAT: 1, AtomKind.PAIR: 2, AtomKind.TAGGED: 3}


class GroundAtom(BaseModel):
    """
    One element of a finite carrier set.

    Int and Rat compare numerically with each other, Neg sits below every other atom,
    Pair compares lexicographically with the left coordinate most significant, and
    Tagged compares by tag and then payload.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: AtomKind
    number: Optional[Fraction] = None
    left: Optional["GroundAtom"] = None
    right: Optional["GroundAtom"] = None
    tag: Optional[str] = None
    payload: Tuple["GroundAtom", ...] = ()

    @model_validator(mode="before")
    @classmethod
    def _decode(cls, data: Any) -> Any:
        if data == "neg":
            return {"kind": AtomKind.NEG}
        if not isinstance(data, dict) or "kind" in data:
            if isinstance(data, dict) and data.get("kind") in (AtomKind.RAT, "rat"):
                number = Fraction(data["number"])
                if number.denominator == 1:
                    data = {**data, "kind": AtomKind.INT, "number": number}
            return data
        if "int" in data:
            return {"kind": AtomKind.INT, "number": Fraction(int(data["int"]))}
        if "rat" in data:
            p, q = data["rat"]
            number = Fraction(int(p), int(q))
            return {"kind": AtomKind.INT if number.denominator == 1 else AtomKind.RAT, "number": number}
        if "pair" in data:
            left, right = data["pair"]
            return {"kind": AtomKind.PAIR, "left": left, "right": right}
        if "tag" in data:
            return {"kind": AtomKind.TAGGED, "tag": data["tag"], "payload": tuple(data.get("payload", ()))}
        raise ValueError(f"Unrecognised atom encoding: {data!r}")

    @model_validator(mode="after")
    def _check_shape(self) -> "GroundAtom":
        if self.kind in (AtomKind.INT, AtomKind.RAT) and self.number is None:
            raise ValueError("Numeric atoms need a number.")
        if self.kind == AtomKind.INT and self.number.denominator != 1:
            raise ValueError("Int atoms must be integral.")
        if self.kind == AtomKind.PAIR and (self.left is None or self.right is None):
            raise ValueError("Pair atoms need both coordinates.")
        if self.kind == AtomKind.TAGGED and not self.tag:
            raise ValueError("Tagged atoms need a tag.")
        return self

    @model_serializer
    def _encode(self) -> Any:
        if self.kind == AtomKind.NEG:
            return "neg"
        if self.kind == AtomKind.INT:
            return {"int": self.number.numerator}
        if self.kind == AtomKind.RAT:
            return {"rat": [self.number.numerator, self.number.denominator]}
        if self.kind == AtomKind.PAIR:
            return {"pair": [self.left._encode(), self.right._encode()]}
        return {"tag": self.tag, "payload": [atom._encode() for atom in self.payload]}

    @cached_property
    def sort_key(self) -> tuple:
        rank = _KIND_RANK[self.kind]
        if self.kind == AtomKind.NEG:
            return (rank,)
        if self.kind in (AtomKind.INT, AtomKind.RAT):
            return (rank, self.number)
        if self.kind == AtomKind.PAIR:
            return (rank, self.left.sort_key, self.right.sort_key)
        return (rank, self.tag, tuple(atom.sort_key for atom in self.payload))

    def __lt__(self, other: "GroundAtom") -> bool:
        return self.sort_key < other.sort_key

    def __le__(self, other: "GroundAtom") -> bool:
        return self.sort_key <= other.sort_key

    def __gt__(self, other: "GroundAtom") -> bool:
        return self.sort_key > other.sort_key

    def __ge__(self, other: "GroundAtom") -> bool:
        return self.sort_key >= other.sort_key

    def __repr__(self) -> str:
        if self.kind == AtomKind.NEG:
            return "Neg"
        if self.kind in (AtomKind.INT, AtomKind.RAT):
            return str(self.number)
        if self.kind == AtomKind.PAIR:
            return f"({self.left!r}, {self.right!r})"
        return f"{self.tag}{list(self.payload)!r}"


GroundAtom.model_rebuild()


class GroundDescriptor(BaseModel):
    kind: str = Field(description="range | window | explicit | lex | reversed | sentinel | tagged")
    params: Dict[str, Any] = Field(default_factory=dict)


# Descriptors whose declared order is the natural atom order.
NATURAL_ORDER_KINDS = {"range", "window", "explicit", "tagged"}


class GroundSet(BaseModel):
    """A finite carrier listed in ascending declared order."""
    model_config = ConfigDict(frozen=True)

    atoms: Tuple[GroundAtom, ...]
    descriptor: GroundDescriptor = Field(default_factory=lambda: GroundDescriptor(kind="explicit"))

    @model_validator(mode="after")
    def _check_atoms(self) -> "GroundSet":
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("Ground set atoms must be pairwise distinct.")
        if self.descriptor.kind in NATURAL_ORDER_KINDS:
            for lower, upper in zip(self.atoms, self.atoms[1:]):
                if not lower < upper:
                    raise ValueError(f"Atoms must ascend strictly: {lower!r} precedes {upper!r}.")
        return self

    @cached_property
    def ranks(self) -> Dict[GroundAtom, int]:
        return {atom: position for position, atom in enumerate(self.atoms)}

    @property
    def size(self) -> int:
        return len(self.atoms)

    def rank(self, atom: GroundAtom) -> int:
        return self.ranks[atom]

    def compare(self, a: GroundAtom, b: GroundAtom) -> int:
        ra, rb = self.ranks[a], self.ranks[b]
        return (ra > rb) - (ra < rb)

    def __contains__(self, atom: GroundAtom) -> bool:
        return atom in self.ranks


class IndexSet(BaseModel):
    """Ordered index labels J; rational labels appear once J has been enlarged."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    labels: Tuple[Fraction, ...]

    @model_validator(mode="before")
    @classmethod
    def _coerce(cls, data: Any) -> Any:
        if isinstance(data, (list, tuple)):
            data = {"labels": data}
        if isinstance(data, dict) and "labels" in data:
            data = {**data, "labels": tuple(as_label(raw) for raw in data["labels"])}
        return data

    @model_validator(mode="after")
    def _check_ascending(self) -> "IndexSet":
        for lower, upper in zip(self.labels, self.labels[1:]):
            if not lower < upper:
                raise ValueError("Index labels must be distinct and strictly ascending.")
        return self

    @model_serializer
    def _encode(self) -> List[Any]:
        return [label_to_json(label) for label in self.labels]

    @classmethod
    def range(cls, n: int) -> "IndexSet":
        return cls(labels=tuple(Fraction(i) for i in range(n)))

    @cached_property
    def positions(self) -> Dict[Fraction, int]:
        return {label: position for position, label in enumerate(self.labels)}

    @property
    def size(self) -> int:
        return len(self.labels)

    def __contains__(self, label: Any) -> bool:
        return as_label(label) in self.positions


class InjectiveTuple(BaseModel):
    """
    An injective function from an index set into a ground set.

    `increasing` records strict ascent in the declared order of the ground set the tuple was
    drawn from; `is_increasing` checks it against a given ground set.
    """
    model_config = ConfigDict(frozen=True)

    index: IndexSet
    values: Tuple[GroundAtom, ...]
    increasing: bool = False

    @model_validator(mode="after")
    def _check_injective(self) -> "InjectiveTuple":
        if len(self.values) != self.index.size:
            raise ValueError("A tuple needs exactly one value per index label.")
        if len(set(self.values)) != len(self.values):
            raise ValueError("Tuple values must be pairwise distinct.")
        return self

    def value_of(self, label: Any) -> GroundAtom:
        return self.values[self.index.positions[as_label(label)]]

    def as_map(self) -> Dict[Fraction, GroundAtom]:
        return dict(zip(self.index.labels, self.values))

    def __repr__(self) -> str:
        return f"<{', '.join(repr(v) for v in self.values)}>"


class Kernel(BaseModel):
    """A partial injective function f on index labels, stored as its graph."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pairs: FrozenSet[Tuple[Fraction, Fraction]] = frozenset()

    @model_validator(mode="before")
    @classmethod
    def _coerce(cls, data: Any) -> Any:
        if isinstance(data, (set, frozenset, list, tuple)):
            data = {"pairs": data}
        if isinstance(data, dict) and "pairs" in data:
            data = {**data, "pairs": frozenset((as_label(i), as_label(j)) for i, j in data["pairs"])}
        return data

    @model_validator(mode="after")
    def _check_partial_injection(self) -> "Kernel":
        sources = [i for i, _ in self.pairs]
        targets = [j for _, j in self.pairs]
        if len(set(sources)) != len(sources):
            raise ValueError("A kernel must be a partial function.")
        if len(set(targets)) != len(targets):
            raise ValueError("A kernel must be injective.")
        return self

    @model_serializer
    def _encode(self) -> Dict[str, Any]:
        return {"pairs": [[label_to_json(i), label_to_json(j)] for i, j in sorted(self.pairs)]}

    @cached_property
    def mapping(self) -> Dict[Fraction, Fraction]:
        return dict(self.pairs)

    @cached_property
    def domain(self) -> FrozenSet[Fraction]:
        return frozenset(i for i, _ in self.pairs)

    @cached_property
    def range(self) -> FrozenSet[Fraction]:
        return frozenset(j for _, j in self.pairs)

    @property
    def generators(self) -> List[Fraction]:
        """Dom(f) minus Rg(f), ascending."""
        return sorted(self.domain - self.range)

    @property
    def support(self) -> List[Fraction]:
        return sorted(self.domain | self.range)

    def apply(self, label: Any) -> Optional[Fraction]:
        return self.mapping.get(as_label(label))

    def inverse(self) -> "Kernel":
        return Kernel(pairs=frozenset((j, i) for i, j in self.pairs))

    def restrict(self, labels) -> "Kernel":
        keep = {as_label(label) for label in labels}
        return Kernel(pairs=frozenset((i, j) for i, j in self.pairs if i in keep and j in keep))

    def is_identity_on(self, index: IndexSet) -> bool:
        return self.pairs == frozenset((label, label) for label in index.labels)

    def is_order_preserving(self) -> bool:
        ordered = sorted(self.pairs)
        return all(a[1] < b[1] for a, b in zip(ordered, ordered[1:]))

    def __len__(self) -> int:
        return len(self.pairs)

    def __repr__(self) -> str:
        body = ", ".join(f"{i}->{j}" for i, j in sorted(self.pairs))
        return f"Kernel({{{body}}})"
