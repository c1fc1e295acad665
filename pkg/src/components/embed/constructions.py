# src/components/embed/constructions.py

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.components.families.models import Graph
from src.components.families.service import (
    bounded_glued,
    directed_shift,
    glued_blocks,
    kernel_graph_on,
    shift_graph,
)
from src.components.kernel_analysis.service import classify, decompose_ordered, extend_star, minimal_k
from src.components.tuplespace.models import GroundAtom, IndexSet, InjectiveTuple, Kernel
from src.components.tuplespace.service import (
    NEG,
    from_atoms,
    int_atom,
    pair_atom,
    rat_atom,
    reverse,
    tagged_atom,
)
from src.core.models.errors import (
    CycleInKernel,
    GroundTooSmall,
    IdentityKernel,
    IndexMismatch,
    KTooSmall,
)
from src.core.models.ontology import BlockType, Side

from .models import IntertwinedPlan, VertexMap

logger = logging.getLogger(__name__)

Values = Dict[Fraction, GroundAtom]


def _int_values(vertex: InjectiveTuple) -> Tuple[int, ...]:
    return tuple(int(value.number) for value in vertex.values)


def _attach(source: Graph, images: Sequence[InjectiveTuple], f: Kernel, directed: bool, name: str) -> VertexMap:
    """Target = the kernel graph induced on the distinct images."""
    distinct: List[InjectiveTuple] = []
    position: Dict[InjectiveTuple, int] = {}
    assignment = []
    for image in images:
        if image not in position:
            position[image] = len(distinct)
            distinct.append(image)
        assignment.append(position[image])
    target = kernel_graph_on(distinct, f, directed=directed)
    target = target.model_copy(update={"family": target.family.model_copy(update={"name": name})})
    return VertexMap(source=source, target=target, assignment=assignment)


# --- Bounded glued graph ---

def embed_bounded(n_bar: Sequence[int], n: int) -> VertexMap:
    """Sh_{max+1}(n) into Sh_{n_bar,b}(n): every block reads off the first n_i + 1 values."""
    n_bar = list(n_bar)
    if not n_bar or min(n_bar) < 1:
        raise ValueError(f"n_bar must be a nonempty list of positive lengths, got {n_bar}.")
    if n <= max(n_bar):
        raise GroundTooSmall(f"Ground size {n} must exceed max(n_bar) = {max(n_bar)}.")
    source = shift_graph(max(n_bar) + 1, n)
    target = bounded_glued(n_bar, n)
    index = target.vertices[0].index
    assignment = []
    for vertex in source.vertices:
        values = _int_values(vertex)
        image = InjectiveTuple(
            index=index,
            values=tuple(
                pair_atom(int_atom(i), int_atom(values[h]))
                for i, length in enumerate(n_bar) for h in range(length + 1)
            ),
            increasing=True,
        )
        assignment.append(target.index_of(image))
    return VertexMap(source=source, target=target, assignment=assignment)


# --- Intertwined construction ---

def intertwined_plan(f: Kernel) -> Optional[IntertwinedPlan]:
    """
    Extend f, take the chain of its least generator, and recurse on what is left. Every
    label off the chain is anchored to the last chain position below it.
    """
    if not f.pairs:
        return None
    extension = extend_star(f)
    chain = list(extension.chain)
    orbit_length = 0
    while chain[orbit_length] in f.mapping:
        orbit_length += 1
    on_chain = set(chain)
    rest = [label for label in extension.labels.labels if label not in on_chain]
    anchors = [(label, max(h for h, c in enumerate(chain) if c < label)) for label in rest]
    inner = intertwined_plan(extension.kernel.restrict(rest)) if rest else None
    return IntertwinedPlan(chain=chain, orbit_length=orbit_length, anchors=anchors, inner=inner)


def intertwined_values(plan: Optional[IntertwinedPlan], mu: Sequence[int]) -> Values:
    """
    Raw atoms for one source vertex mu over the enlarged labels of the plan. Chain position
    h holds mu[h] followed by the next len(mu) - 1 - orbit_length coordinates, so the
    unextended orbit alone reads every coordinate of mu. Arcs mu -> nu have
    nu[h + 1] = mu[h], which keeps f~(c_h) and c_h equal across the arc.
    """
    if plan is None:
        return {}
    inner = intertwined_values(plan.inner, mu)
    span = len(mu) - 1 - plan.orbit_length
    values: Values = {
        label: pair_atom(int_atom(mu[h]), pair_atom(NEG, tagged_atom("tail", *map(int_atom, mu[h + 1:h + 1 + span]))))
        for h, label in enumerate(plan.chain)
    }
    for label, h in plan.anchors:
        values[label] = pair_atom(int_atom(mu[h]), inner[label])
    return values


def intertwined_table(f: Kernel, labels: IndexSet, mus: Sequence[Sequence[int]]) -> List[Values]:
    """
    Values over `labels` for every mu. Labels of Dom(f) and Rg(f) receive the integer rank
    of their raw atom among all raw atoms used; every other label gets a fresh rational
    placed between its neighbours, distinct across the whole table.
    """
    plan = intertwined_plan(f)
    support = set(f.support)
    raw = [{label: value for label, value in intertwined_values(plan, mu).items() if label in support} for mu in mus]
    ranks = {atom: position for position, atom in enumerate(sorted({atom for row in raw for atom in row.values()}))}

    spread = labels.size + 1
    denominator = len(mus) * spread + 1
    table: List[Values] = []
    for v, row in enumerate(raw):
        numbers: Dict[Fraction, Fraction] = {label: Fraction(ranks[atom]) for label, atom in row.items()}
        run: List[Fraction] = []
        previous: Optional[Fraction] = None

        def close_run(following: Optional[Fraction]):
            if not run:
                return
            base = numbers[previous] if previous is not None else numbers[following] - 1
            for t, label in enumerate(run, start=1):
                numbers[label] = base + Fraction(v * spread + t, denominator)
            run.clear()

        for label in labels.labels:
            if label in support:
                close_run(label)
                previous = label
            else:
                run.append(label)
        close_run(None)
        table.append({label: rat_atom(numbers[label]) for label in labels.labels})
    return table


def embed_intertwined(f: Kernel, j: IndexSet, k: int, window: int) -> VertexMap:
    """
    RSh_k(window) into the directed kernel graph D_f on increasing tuples over j. The source
    arcs are mu -> nu with mu(h) = nu(h + 1).
    """
    if not (f.domain | f.range) <= set(j.labels):
        raise IndexMismatch(f"{f!r} references labels outside {list(j.labels)}.")
    needed = minimal_k(f)
    if k < needed:
        raise KTooSmall(k, needed)
    source = directed_shift(k, window, Side.RIGHT)
    mus = [_int_values(vertex) for vertex in source.vertices]
    table = intertwined_table(f, j, mus)
    images = [InjectiveTuple(index=j, values=tuple(row[label] for label in j.labels), increasing=True) for row in table]
    logger.debug(f"Intertwined construction for {f!r} with k={k} over {len(mus)} source vertices.")
    return _attach(source, images, f, directed=True, name="intertwined")


# --- Unordered kernels ---

def _phi(alpha: Fraction, m: int, third: GroundAtom) -> GroundAtom:
    return tagged_atom("phi", rat_atom(alpha), int_atom(m), third)


def _mu_atom(values: Sequence[int]) -> GroundAtom:
    return tagged_atom("mu", *(int_atom(v) for v in values))


def embed_no_order(f: Kernel, lam: IndexSet, window: int) -> VertexMap:
    """
    Sh_{n+1}(window) into E_f on injective tuples over lam, through the bounded glued graph.
    A kernel that fixes its whole domain (with lam larger than it) gets a complete graph
    on `window` vertices instead.
    """
    report = classify(f, lam)
    if report.has_cycles:
        raise CycleInKernel(f"{f!r} has finite cycles through {report.cycle_points}.")
    if f.is_identity_on(lam):
        raise IdentityKernel("The identity kernel would make every vertex a loop.")

    fixed = set(report.fixed_points)
    generators = report.generators
    if not generators:
        source = shift_graph(1, window)
        images = []
        for vertex in source.vertices:
            m = _int_values(vertex)
            images.append(InjectiveTuple(
                index=lam,
                values=tuple(
                    _phi(alpha, 0, int_atom(1)) if alpha in fixed else _phi(alpha, 0, _mu_atom(m))
                    for alpha in lam.labels
                ),
            ))
        logger.info(f"{f!r} fixes its whole domain; returning the complete graph on {window} vertices.")
        return _attach(source, images, f, directed=False, name="no_order")

    n_bar = [report.n_beta[beta] for beta in generators]
    bounded = embed_bounded(n_bar, window)
    glued = bounded.target

    chains: Dict[Fraction, Tuple[int, int]] = {}
    for position, beta in enumerate(generators):
        current = beta
        for h in range(n_bar[position] + 1):
            chains[current] = (position, h)
            current = f.mapping.get(current)

    images = []
    for vertex in glued.vertices:
        blocks = glued_blocks(vertex, n_bar)
        mu = _mu_atom(_int_values_of_pairs(vertex))
        values = []
        for alpha in lam.labels:
            if alpha in chains:
                position, h = chains[alpha]
                values.append(_phi(generators[position], blocks[position][h], int_atom(0)))
            elif alpha in fixed:
                values.append(_phi(alpha, 0, int_atom(1)))
            else:
                values.append(_phi(alpha, 0, mu))
        images.append(InjectiveTuple(index=lam, values=tuple(values)))

    second = _attach(glued, images, f, directed=False, name="no_order")
    return VertexMap(
        source=bounded.source,
        target=second.target,
        assignment=[second.assignment[image] for image in bounded.assignment],
    )


def _int_values_of_pairs(vertex: InjectiveTuple) -> List[int]:
    flat = []
    for value in vertex.values:
        flat.extend((int(value.left.number), int(value.right.number)))
    return flat


# --- Order-preserving kernels ---

def _negated(f: Kernel) -> Kernel:
    return Kernel(pairs=frozenset((-i, -fi) for i, fi in f.pairs))


def ordered_minimal_k(f: Kernel, m: int) -> int:
    """The least k the ordered construction accepts for f on range(m)."""
    k = 1
    for block in decompose_ordered(f, IndexSet.range(m)).blocks:
        if block.block_type == BlockType.INCREASING:
            k = max(k, minimal_k(block.kernel))
        elif block.block_type == BlockType.DECREASING:
            k = max(k, minimal_k(_negated(block.kernel)))
    return k


def _decreasing_table(kernel: Kernel, labels: Sequence[Fraction], mus: Sequence[Sequence[int]]) -> List[Values]:
    """Run the increasing construction on the mirrored block, then read its values top down."""
    mirrored = IndexSet(labels=sorted(-label for label in labels))
    table = intertwined_table(_negated(kernel), mirrored, mus)
    flipped = reverse(from_atoms(atom for row in table for atom in row.values()))
    return [{label: int_atom(flipped.rank(row[-label])) for label in labels} for row in table]


def embed_ordered(f: Kernel, m: int, k: int, window: int) -> VertexMap:
    """
    RSh_k(window) into D_f on increasing m-tuples, for an order-preserving f. Each convex
    block gets its own copy of the increasing, mirrored or constant construction, tagged
    with the block number so the copies stack in order.
    """
    j = IndexSet.range(m)
    if not (f.domain | f.range) <= set(j.labels):
        raise IndexMismatch(f"{f!r} references labels outside [0, {m}).")
    if f.is_identity_on(j):
        raise IdentityKernel("The identity kernel would make every vertex a loop.")
    decomposition = decompose_ordered(f, j)
    needed = ordered_minimal_k(f, m)
    if k < needed:
        raise KTooSmall(k, needed)

    source = directed_shift(k, window, Side.RIGHT)
    mus = [_int_values(vertex) for vertex in source.vertices]

    rows: List[Dict[Fraction, GroundAtom]] = [{} for _ in mus]
    for i, block in enumerate(decomposition.blocks):
        tag = int_atom(i)
        if block.block_type == BlockType.CONSTANT:
            for row, mu in zip(rows, mus):
                for label in block.labels:
                    third = int_atom(0) if block.kernel.apply(label) == label else _mu_atom(mu)
                    row[label] = pair_atom(tag, pair_atom(rat_atom(label), third))
            continue
        if block.block_type == BlockType.INCREASING:
            table = intertwined_table(block.kernel, IndexSet(labels=block.labels), mus)
        else:
            table = _decreasing_table(block.kernel, block.labels, mus)
        for row, values in zip(rows, table):
            for label in block.labels:
                row[label] = pair_atom(tag, pair_atom(values[label], int_atom(0)))

    images = [InjectiveTuple(index=j, values=tuple(row[label] for label in j.labels), increasing=True) for row in rows]
    logger.debug(f"Ordered construction for {f!r}: {len(decomposition.blocks)} blocks, k={k}.")
    return _attach(source, images, f, directed=True, name="ordered")
