# src/components/embed/pipeline.py

import logging
from typing import Dict, List, Optional, Tuple

from src.components.canon.models import IntervalStructure, RelationOracle
from src.components.canon.service import CanonService
from src.components.families.service import shift_graph
from src.components.tuplespace.service import (
    from_atoms,
    initial_segment,
    int_atom,
    integer_range,
    lex_product,
    order_isomorphism,
    pair_atom,
    window as integer_window,
)
from src.core.models.errors import (
    AllEqualKernel,
    CanonizationFailed,
    NotAHomomorphism,
    VerificationFailed,
    WrongFamily,
)

from .models import PipelineResult, VertexMap
from .verify import verify_map

logger = logging.getLogger(__name__)

Slot = Tuple[int, int]  # (copy, position inside the copy's integer window)


def _values(vertex) -> Tuple[int, ...]:
    return tuple(int(value.number) for value in vertex.values)


def _room(structure: IntervalStructure, k: int) -> Tuple[int, int]:
    """Window slack needed below the first copy and above every copy."""
    first = structure.starts[0]
    below = first + 1 if first > 0 else 0
    ends = [start + length for start, length in zip(structure.starts, structure.lengths)]
    nexts = structure.starts[1:] + [k]
    above = max(following - end - 1 for end, following in zip(ends, nexts))
    return below, above


def _fill(k: int, fixed: Dict[int, Slot]) -> List[Slot]:
    """
    Complete the fixed positions to an increasing k-sequence: positions after a fixed one
    take the next slots of its copy, positions before the first fixed one the slots just
    below it.
    """
    anchors = sorted(fixed)
    slots: List[Optional[Slot]] = [None] * k
    for p in anchors:
        slots[p] = fixed[p]
    copy, z = fixed[anchors[0]]
    for offset, p in enumerate(range(anchors[0] - 1, -1, -1), start=1):
        slots[p] = (copy, z - offset)
    for a, b in zip(anchors, anchors[1:] + [k]):
        copy, z = fixed[a]
        for offset, p in enumerate(range(a + 1, b), start=1):
            slots[p] = (copy, z + offset)
    if any(lower >= upper for lower, upper in zip(slots, slots[1:])):
        raise RuntimeError(f"Filled sequence {slots} is not increasing.")
    return slots


def _orient(u_values: Tuple[int, ...], v_values: Tuple[int, ...]) -> bool:
    """True when u -> v is the shift direction u(i) = v(i - 1)."""
    if len(u_values) == 1:
        return u_values < v_values
    return u_values[1:] == v_values[:-1]


def pipeline_hom_to_subgraphs(
    t: VertexMap,
    canon: CanonService,
    window: Optional[int] = None,
) -> PipelineResult:
    """
    From a homomorphism t: Sh_k(m) -> G, find a canonical ground subset for its kernel
    relation and read off an injective homomorphism Sh_r(window) -> G with r <= k.
    """
    if t.source.family.name != "sh":
        raise WrongFamily(f"The pipeline needs a map out of Sh_k(m), got family '{t.source.family.name}'.")
    report = verify_map(t)
    if not report.is_homomorphism:
        raise NotAHomomorphism(f"The input map is not a homomorphism: {report.counterexamples[:3]}")

    k, m = t.source.family.params["r"], t.source.family.params["n"]
    source_index = {_values(vertex): u for u, vertex in enumerate(t.source.vertices)}
    oracle = RelationOracle(name="homomorphism", arity=k, ground=m, key=lambda a: t.assignment[source_index[a]])

    form = None
    for target in range(m, k, -1):
        form = canon.canonize(oracle, target)
        if form is not None:
            break
    if form is None:
        raise CanonizationFailed(f"No canonical subset of size above {k} inside a ground of {m}.", required_ground=None)
    if not form.S:
        raise AllEqualKernel("Every tuple over the canonical subset has the same image.")

    structure = form.intervals
    copies = structure.count
    out_r = structure.max_length + 1
    below, above = _room(structure, k)
    available = len(form.N)
    w = window if window is not None else available // copies - below - above
    needed = copies * (max(w, out_r) + below + above)
    if w < out_r or needed > available:
        raise CanonizationFailed(
            f"A window of {max(w, out_r)} needs {needed} canonical ground elements, found {available}.",
            required_ground=needed,
        )

    lo, hi = -below, w - 1 + above
    slots = lex_product(integer_range(copies), integer_window(lo, hi))
    onto = from_atoms(initial_segment(from_atoms(int_atom(x) for x in form.N), slots.size))
    placement = order_isomorphism(slots, onto)

    def realize(seq: List[Slot]) -> Tuple[int, ...]:
        for copy, z in seq:
            if not lo <= z <= hi:
                raise RuntimeError(f"Slot {(copy, z)} falls outside the copy window [{lo}, {hi}].")
        return tuple(int(placement[pair_atom(int_atom(copy), int_atom(z))].number) for copy, z in seq)

    def planted(values: Tuple[int, ...]) -> Dict[int, Slot]:
        return {
            start + r: (copy, values[r])
            for copy, (start, length) in enumerate(zip(structure.starts, structure.lengths))
            for r in range(length + 1)
        }

    out = shift_graph(out_r, w)
    etas = [realize(_fill(k, planted(_values(vertex)))) for vertex in out.vertices]
    embedding = VertexMap(source=out, target=t.target, assignment=[t.assignment[source_index[eta]] for eta in etas])

    certified = 0
    for a, b in out.edges:
        u, v = (a, b) if _orient(_values(out.vertices[a]), _values(out.vertices[b])) else (b, a)
        f_values, g_values = _values(out.vertices[u]), _values(out.vertices[v])
        fixed = planted(g_values)
        for copy, start in enumerate(structure.starts):
            if start > 0:
                fixed[start - 1] = (copy, f_values[0])
        eta_g = _fill(k, fixed)
        first = (0, f_values[0]) if structure.starts[0] == 0 else (0, lo)
        eta = [first] + eta_g[:-1]
        eta_t, eta_g_t = realize(eta), realize(eta_g)
        if not (oracle.same(eta_t, etas[u]) and oracle.same(eta_g_t, etas[v]) and eta_t[1:] == eta_g_t[:-1]):
            raise VerificationFailed(f"No edge witness for {f_values} ~ {g_values}.")
        certified += 1

    check = verify_map(embedding)
    if not check.is_embedding:
        raise VerificationFailed("The extracted map is not an injective homomorphism.", report=check)

    logger.info(
        f"Pipeline: Sh_{k}({m}) -> Sh_{out_r}({w}) with S={form.S}, {copies} copies, {certified} edges certified."
    )
    return PipelineResult(
        index=out_r,
        embedding=embedding,
        coordinates=form.S,
        ground_used=slots.size,
        window=w,
        copy_window=(lo, hi),
        certified_edges=certified,
    )
