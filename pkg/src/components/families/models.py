# src/components/families/models.py

from functools import cached_property
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.components.tuplespace.models import InjectiveTuple

Edge = Tuple[int, int]


class FamilyDescriptor(BaseModel):
    """How a graph was built, e.g. name="sh" with params {"r": 2, "n": 8}."""
    name: str
    params: Dict[str, Any] = Field(default_factory=dict)


class Graph(BaseModel):
    """
    A finite graph whose vertices keep their tuple labels.
    Undirected edges are stored with the smaller vertex index first; when the graph is
    directed, `edges` is the symmetric closure of `directed_edges`.
    """
    model_config = ConfigDict(frozen=True)

    vertices: Tuple[InjectiveTuple, ...]
    edges: Tuple[Edge, ...] = ()
    directed_edges: Optional[Tuple[Edge, ...]] = None
    family: FamilyDescriptor = Field(default_factory=lambda: FamilyDescriptor(name="custom"))

    @model_validator(mode="after")
    def _check_edges(self) -> "Graph":
        n = len(self.vertices)
        seen = set()
        for u, v in self.edges:
            if not 0 <= u < v < n:
                raise ValueError(f"Edge ({u}, {v}) must satisfy 0 <= u < v < {n}.")
            if (u, v) in seen:
                raise ValueError(f"Edge ({u}, {v}) is listed twice.")
            seen.add((u, v))
        if self.directed_edges is not None:
            closure = set()
            for u, v in self.directed_edges:
                if u == v or not (0 <= u < n and 0 <= v < n):
                    raise ValueError(f"Directed edge ({u}, {v}) is a loop or out of range.")
                closure.add((min(u, v), max(u, v)))
            if closure != seen:
                raise ValueError("Undirected edges must be the symmetric closure of the directed edges.")
        return self

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def is_directed(self) -> bool:
        return self.directed_edges is not None

    @cached_property
    def adjacency(self) -> List[FrozenSet[int]]:
        neighbours = [set() for _ in range(self.n)]
        for u, v in self.edges:
            neighbours[u].add(v)
            neighbours[v].add(u)
        return [frozenset(s) for s in neighbours]

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges)

    @cached_property
    def arc_set(self) -> FrozenSet[Edge]:
        return frozenset(self.directed_edges or ())

    @cached_property
    def vertex_index(self) -> Dict[InjectiveTuple, int]:
        return {vertex: position for position, vertex in enumerate(self.vertices)}

    def index_of(self, vertex: InjectiveTuple) -> int:
        return self.vertex_index[vertex]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_set

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arc_set

    @cached_property
    def out_adjacency(self) -> List[Tuple[int, ...]]:
        successors = [[] for _ in range(self.n)]
        for u, v in sorted(self.arc_set):
            successors[u].append(v)
        return [tuple(s) for s in successors]

    def out_neighbors(self, u: int) -> Tuple[int, ...]:
        return self.out_adjacency[u]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def components(self) -> List[List[int]]:
        return sorted(sorted(c) for c in nx.connected_components(self.to_networkx()))
