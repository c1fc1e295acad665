# src/components/jobs/models.py

from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from src.components.tuplespace.models import IndexSet, Kernel, as_label
from src.core.models.ontology import ExitCode, Subcommand


class JobSpec(BaseModel):
    """Everything one CLI invocation depends on; equal specs produce equal artifacts."""
    subcommand: Subcommand
    inputs: List[str] = Field(default_factory=list)
    output: Optional[str] = None
    options: Dict[str, Any] = Field(default_factory=dict)
    seed: int = 0
    time_budget: Optional[float] = Field(None, gt=0)

    def option(self, name: str, default: Any = None) -> Any:
        value = self.options.get(name)
        return default if value is None else value


class JobResult(BaseModel):
    exit_code: ExitCode = ExitCode.OK
    artifact: Optional[Dict[str, Any]] = None
    message: str = ""
    written: List[str] = Field(default_factory=list)


class KernelText(BaseModel):
    """Kernels written as "0:1,1:2"; rational labels as "1/2:3"."""
    text: str

    @field_validator("text")
    @classmethod
    def _check_text(cls, value: str) -> str:
        for item in filter(None, (part.strip() for part in value.split(","))):
            if item.count(":") != 1:
                raise ValueError(f"Kernel pair '{item}' must read 'i:j'.")
        return value

    def to_kernel(self) -> Kernel:
        pairs = []
        for item in filter(None, (part.strip() for part in self.text.split(","))):
            i, j = item.split(":")
            pairs.append((as_label(i.strip()), as_label(j.strip())))
        return Kernel(pairs=frozenset(pairs))


def parse_int_list(text: Optional[str]) -> List[int]:
    if not text:
        return []
    return [int(part) for part in text.split(",") if part.strip()]


def parse_index_set(text: Optional[str], kernel: Kernel) -> IndexSet:
    """A size ("3"), a label list ("0,1,5/2"), or by default the labels the kernel touches."""
    if not text:
        return IndexSet(labels=kernel.support)
    if "," not in text and "/" not in text:
        return IndexSet.range(int(text))
    return IndexSet(labels=sorted(Fraction(part.strip()) for part in text.split(",") if part.strip()))
