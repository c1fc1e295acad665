# src/components/embed/models.py

from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from src.components.families.models import Graph
from src.components.tuplespace.models import LabelField


class VertexMap(BaseModel):
    """A total map from source vertex indices to target vertex indices."""
    source: Graph
    target: Graph
    assignment: List[int]

    @field_validator("assignment", mode="before")
    @classmethod
    def _decode_pairs(cls, value: Any) -> Any:
        if value and isinstance(value[0], (list, tuple)):
            pairs = dict(value)
            if sorted(pairs) != list(range(len(pairs))):
                raise ValueError("Assignment pairs must cover source vertices 0..n-1 once each.")
            return [pairs[u] for u in range(len(pairs))]
        return value

    @field_serializer("assignment")
    def _encode_pairs(self, assignment: List[int]) -> List[List[int]]:
        return [[u, image] for u, image in enumerate(assignment)]

    @model_validator(mode="after")
    def _check_total(self) -> "VertexMap":
        if len(self.assignment) != self.source.n:
            raise ValueError(f"The map covers {len(self.assignment)} of {self.source.n} source vertices.")
        if any(not 0 <= image < self.target.n for image in self.assignment):
            raise ValueError("The map sends a vertex outside the target.")
        return self

    def image(self, u: int) -> int:
        return self.assignment[u]


class EmbedReport(BaseModel):
    is_homomorphism: bool
    is_injective: bool
    is_induced: bool
    counterexamples: List[str] = Field(default_factory=list)
    edges_checked: int = 0

    @property
    def is_embedding(self) -> bool:
        return self.is_homomorphism and self.is_injective


class IntertwinedPlan(BaseModel):
    """
    The label structure of the recursive intertwined construction, independent of the
    source vertex: the chain of the least generator, how many of its first steps follow
    the unextended kernel, and for every other label the chain position just below it
    together with the plan one level down.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    chain: List[LabelField]
    orbit_length: int = Field(0, description="n_beta0 of the unextended kernel at this level.")
    anchors: List[Tuple[LabelField, int]] = Field(default_factory=list)
    inner: Optional["IntertwinedPlan"] = None


IntertwinedPlan.model_rebuild()


class PipelineResult(BaseModel):
    index: int = Field(description="r of the embedded Sh_r; never exceeds the input arity.")
    embedding: VertexMap
    coordinates: List[int] = Field(description="The canonical coordinate set S.")
    ground_used: int
    window: int
    copy_window: Tuple[int, int]
    certified_edges: int = 0


class SweepOutcome(BaseModel):
    sample: int
    construction: str
    kernel: Dict[str, Any]
    passed: bool
    detail: str = ""
