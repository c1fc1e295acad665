# src/components/chroma/models.py

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_serializer, model_validator

from src.components.families.models import Graph
from src.core.models.ontology import CertificateKind


class Coloring(BaseModel):
    """A color id in [0, palette_size) for each vertex index."""
    assignment: Dict[int, int]
    palette_size: int

    @model_validator(mode="before")
    @classmethod
    def _decode(cls, data: Any) -> Any:
        if isinstance(data, dict) and "colors" in data:
            return {"assignment": dict(enumerate(data["colors"])), "palette_size": data["palette"]}
        if isinstance(data, dict) and isinstance(data.get("assignment"), list):
            return {"assignment": dict(data["assignment"]), "palette_size": data["palette"]}
        return data

    @model_validator(mode="after")
    def _check_palette(self) -> "Coloring":
        if self.palette_size < 0:
            raise ValueError("Palette size cannot be negative.")
        bad = {v: c for v, c in self.assignment.items() if not 0 <= c < self.palette_size}
        if bad:
            raise ValueError(f"Colors outside [0, {self.palette_size}): {bad}")
        return self

    @model_serializer
    def _encode(self) -> Dict[str, Any]:
        vertices = sorted(self.assignment)
        if vertices == list(range(len(vertices))):
            return {"colors": [self.assignment[v] for v in vertices], "palette": self.palette_size}
        return {"assignment": [[v, self.assignment[v]] for v in vertices], "palette": self.palette_size}

    @classmethod
    def from_list(cls, colors: List[int], palette_size: Optional[int] = None) -> "Coloring":
        return cls(
            assignment=dict(enumerate(colors)),
            palette_size=palette_size if palette_size is not None else (max(colors) + 1 if colors else 0),
        )

    def color_of(self, v: int) -> int:
        return self.assignment[v]

    @property
    def used_colors(self) -> int:
        return len(set(self.assignment.values()))


class LowerBoundCertificate(BaseModel):
    kind: CertificateKind
    clique: List[int] = Field(default_factory=list, description="Vertices of a clique of size chi.")
    k: Optional[int] = Field(None, description="Number of colors proven insufficient.")
    nodes: Optional[int] = None


class SolveStats(BaseModel):
    nodes: int = 0
    wall_time: float = 0.0
    method: str = "branch_and_bound"


class SolveReport(BaseModel):
    """
    The chromatic number with its witness coloring and a certificate that one color less
    does not suffice. When the time budget runs out `exact` is False, `chi` is the best
    palette found and `lower_bound` the best proven bound.
    """
    chi: int
    witness: Coloring
    lower_bound: int
    certificate: Optional[LowerBoundCertificate] = None
    exact: bool = True
    stats: SolveStats = Field(default_factory=SolveStats)


class ColoredGraph(BaseModel):
    graph: Graph
    coloring: Coloring
