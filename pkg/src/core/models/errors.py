# src/core/models/errors.py

from typing import Any, List, Optional


class ShiftLabError(Exception):
    """Base class for every domain error raised by shiftlab."""


class IdentityKernel(ShiftLabError, ValueError):
    """A graph-defining kernel must not be the identity."""


class IndexMismatch(ShiftLabError, ValueError):
    """A kernel or tuple refers to labels outside the index set it is used with."""


class EmptyKernel(ShiftLabError, ValueError):
    """The operation needs a kernel with at least one pair."""


class NotIncreasingOrbits(ShiftLabError, ValueError):
    """Some orbit of the kernel is not strictly increasing."""


class NotOrderPreserving(ShiftLabError, ValueError):
    """The kernel does not preserve the order of its domain."""


class KTooSmall(ShiftLabError, ValueError):
    """The requested tuple length is below the minimal admissible one."""

    def __init__(self, k: int, minimal_k: int):
        self.k = k
        self.minimal_k = minimal_k
        super().__init__(f"k={k} is too small; the minimal admissible k is {minimal_k}.")


class CycleInKernel(ShiftLabError, ValueError):
    """Finite cycles of a kernel have no shift-graph embedding and are refused."""


class GroundTooSmall(ShiftLabError, ValueError):
    """The ground set has too few elements for the requested tuples."""


class MissingVertex(ShiftLabError, ValueError):
    """A coloring leaves some vertex of the graph uncolored."""


class NonBinaryGround(ShiftLabError, ValueError):
    """The ground must be every binary string of one common length."""


class TowerTooLarge(ShiftLabError, ValueError):
    """The recursive coloring would materialize more atoms than the guard allows."""


class WrongFamily(ShiftLabError, ValueError):
    """The graph does not come from the family the operation expects."""


class CycleDetected(ShiftLabError, ValueError):
    """The successor map has a cycle where a forest of paths was expected."""


class CoverGap(ShiftLabError, ValueError):
    """The parts of a cover or edge split leave a vertex or an edge out."""


class NotEquivalence(ShiftLabError, ValueError):
    """The oracle fails to be an equivalence relation on the sampled tuples."""

    def __init__(self, message: str, witness: Optional[List[Any]] = None):
        self.witness = witness or []
        super().__init__(message)


class EmptyS(ShiftLabError, ValueError):
    """The canonical coordinate set came out empty."""


class NotAHomomorphism(ShiftLabError, ValueError):
    """Some edge of the source maps to a non-edge or a single vertex."""


class CanonizationFailed(ShiftLabError, ValueError):
    """No canonical form was found within the ground set and node budget."""

    def __init__(self, message: str, required_ground: Optional[int] = None):
        self.required_ground = required_ground
        super().__init__(message)


class AllEqualKernel(ShiftLabError, ValueError):
    """The canonical form identifies every pair of tuples."""


class VerificationFailed(ShiftLabError):
    """A construction failed its own validator. This is always a bug."""

    def __init__(self, message: str, report: Any = None):
        self.report = report
        super().__init__(message)
