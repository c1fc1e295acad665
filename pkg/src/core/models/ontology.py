from enum import Enum, IntEnum


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class OrbitClass(str, Enum):
    FIXED_POINT = "fixed_point"
    FINITE_CYCLE = "finite_cycle"
    FINITE_SHIFT = "finite_shift"


class Direction(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    UNORDERED = "unordered"


class BlockType(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    CONSTANT = "constant"


class CertificateKind(str, Enum):
    CLIQUE_FOUND = "clique_found"
    EXHAUSTION_PROOF = "exhaustion_proof"


class Construction(str, Enum):
    BOUNDED = "bounded"
    INTERTWINED = "intertwined"
    NO_ORDER = "no-order"
    ORDERED = "ordered"
    PIPELINE = "pipeline"


class ExitCode(IntEnum):
    OK = 0
    USAGE = 2
    VERIFICATION_FAILED = 3
    TIMEOUT = 4


class Subcommand(str, Enum):
    GEN = "gen"
    ANALYZE = "analyze"
    CHI = "chi"
    COLOR = "color"
    EMBED = "embed"
    CANON = "canon"
    VERIFY = "verify"
