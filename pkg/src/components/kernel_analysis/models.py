# src/components/kernel_analysis/models.py

from fractions import Fraction
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.components.tuplespace.models import IndexSet, Kernel, LabelField
from src.core.models.ontology import BlockType, Direction, OrbitClass


class OrbitEntry(BaseModel):
    """The class of one label of Dom(f)."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    label: LabelField
    orbit_class: OrbitClass
    cycle_length: Optional[int] = Field(None, description="Set for finite cycles.")
    shift_length: Optional[int] = Field(None, description="n_beta: least n with f^n(beta) outside Dom(f).")
    direction: Optional[Direction] = None


class OrbitReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    entries: List[OrbitEntry] = Field(default_factory=list)
    generators: List[LabelField] = Field(default_factory=list, description="I = Dom(f) minus Rg(f).")

    @property
    def n_beta(self) -> Dict[Fraction, int]:
        """beta -> n_beta for the shift generators."""
        by_label = {entry.label: entry for entry in self.entries}
        return {beta: by_label[beta].shift_length for beta in self.generators}

    @property
    def fixed_points(self) -> List[Fraction]:
        return [e.label for e in self.entries if e.orbit_class == OrbitClass.FIXED_POINT]

    @property
    def cycle_points(self) -> List[Fraction]:
        return [e.label for e in self.entries if e.orbit_class == OrbitClass.FINITE_CYCLE]

    @property
    def has_cycles(self) -> bool:
        return bool(self.cycle_points)

    @property
    def max_shift_length(self) -> int:
        return max(self.n_beta.values(), default=0)

    def entry(self, label) -> OrbitEntry:
        return next(e for e in self.entries if e.label == label)


class Block(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    labels: List[LabelField]
    block_type: BlockType
    kernel: Kernel


class BlockDecomposition(BaseModel):
    blocks: List[Block] = Field(default_factory=list)

    def block_of(self, label) -> int:
        return next(i for i, block in enumerate(self.blocks) if label in block.labels)


class KernelExtension(BaseModel):
    """The enlarged (J~, f~) in which the orbit of beta_0 runs from min J~ to max J~."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    labels: IndexSet
    kernel: Kernel
    beta0: LabelField
    n_beta0: int
    chain: List[LabelField] = Field(description="beta_0, f~(beta_0), ..., f~^n(beta_0).")
