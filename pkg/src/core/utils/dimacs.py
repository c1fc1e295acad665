# src/core/utils/dimacs.py

from typing import Iterable, List, Optional, Tuple

Edge = Tuple[int, int]


def to_dimacs(n: int, edges: Iterable[Edge], comment: Optional[str] = None) -> str:
    """DIMACS edge format with 1-based vertex numbers."""
    edges = list(edges)
    lines = [f"c {line}" for line in (comment or "").splitlines()]
    lines.append(f"p edge {n} {len(edges)}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> Tuple[int, List[Edge]]:
    """Parse DIMACS edge format into a vertex count and 0-based edges with u < v."""
    n: Optional[int] = None
    edges = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise ValueError(f"Line {number}: malformed problem line '{raw}'.")
            n = int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise ValueError(f"Line {number}: edge before the problem line.")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"Line {number}: bad edge '{raw}'.")
            edges.add((min(u, v), max(u, v)))
        else:
            raise ValueError(f"Line {number}: unknown record '{parts[0]}'.")
    if n is None:
        raise ValueError("No problem line found.")
    return n, sorted(edges)
