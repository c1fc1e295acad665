# src/components/kernel_analysis/service.py

import logging
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.components.tuplespace.models import IndexSet, Kernel
from src.core.models.errors import EmptyKernel, IndexMismatch, NotIncreasingOrbits, NotOrderPreserving
from src.core.models.ontology import BlockType, Direction, OrbitClass

from .models import Block, BlockDecomposition, KernelExtension, OrbitEntry, OrbitReport

logger = logging.getLogger(__name__)


def _check_labels(f: Kernel, j: IndexSet):
    stray = (f.domain | f.range) - set(j.labels)
    if stray:
        raise IndexMismatch(f"{f!r} uses labels {sorted(stray)} outside the index set.")


def forward_orbit(f: Kernel, beta: Fraction) -> Tuple[List[Fraction], bool]:
    """Iterate f from beta. Returns the visited labels and whether the walk closed into a cycle."""
    mapping = f.mapping
    visited = [beta]
    current = beta
    while current in mapping:
        current = mapping[current]
        if current == beta:
            return visited, True
        visited.append(current)
    return visited, False


def _direction(chain: Sequence[Fraction]) -> Direction:
    steps = list(zip(chain, chain[1:]))
    if all(a < b for a, b in steps):
        return Direction.INCREASING
    if all(a > b for a, b in steps):
        return Direction.DECREASING
    return Direction.UNORDERED


def classify(f: Kernel, j: IndexSet) -> OrbitReport:
    """Assign each label of Dom(f) to a fixed point, a finite cycle or a finite shift."""
    _check_labels(f, j)
    entries = []
    for beta in sorted(f.domain):
        visited, closed = forward_orbit(f, beta)
        if f.apply(beta) == beta:
            entries.append(OrbitEntry(label=beta, orbit_class=OrbitClass.FIXED_POINT))
        elif closed:
            entries.append(OrbitEntry(label=beta, orbit_class=OrbitClass.FINITE_CYCLE, cycle_length=len(visited)))
        else:
            entries.append(OrbitEntry(
                label=beta,
                orbit_class=OrbitClass.FINITE_SHIFT,
                shift_length=len(visited) - 1,
                direction=_direction(visited),
            ))
    report = OrbitReport(entries=entries, generators=f.generators)
    logger.debug(f"Classified {f!r}: generators={[str(b) for b in report.generators]}.")
    return report


def covered_domain(f: Kernel, report: OrbitReport) -> set:
    """The union of the generator chains f^h(beta), h < n_beta, with the fixed and cycle points."""
    covered = set(report.fixed_points) | set(report.cycle_points)
    for beta, n in report.n_beta.items():
        current = beta
        for _ in range(n):
            covered.add(current)
            current = f.mapping[current]
    return covered


# --- Ordered block decomposition ---

def _check_order_preserving(f: Kernel):
    ordered = sorted(f.pairs)
    for (i, fi), (k, fk) in zip(ordered, ordered[1:]):
        if fi >= fk:
            raise NotOrderPreserving(f"{i} < {k} but f({i}) = {fi} >= f({k}) = {fk}.")


def decompose_ordered(f: Kernel, j: IndexSet) -> BlockDecomposition:
    """
    Partition j into convex blocks J_1 < ... < J_N, each closed under f and of a single
    type. Orbit hulls that overlap are merged; labels outside Dom(f) and Rg(f) join the
    block before them, or the first block when nothing precedes them.
    """
    _check_labels(f, j)
    _check_order_preserving(f)

    hulls: List[Tuple[Fraction, Fraction, BlockType]] = []
    for beta in f.generators:
        chain, _ = forward_orbit(f, beta)
        kind = BlockType.INCREASING if chain[0] < chain[1] else BlockType.DECREASING
        hulls.append((min(chain), max(chain), kind))
    for beta in sorted(f.domain):
        if f.apply(beta) == beta:
            hulls.append((beta, beta, BlockType.CONSTANT))
    hulls.sort(key=lambda hull: hull[0])

    groups: List[List] = []
    for lo, hi, kind in hulls:
        if groups and lo < groups[-1][1]:
            if groups[-1][2] != kind:
                raise NotOrderPreserving(f"Orbits of different type overlap near label {lo}.")
            groups[-1][1] = max(groups[-1][1], hi)
        else:
            groups.append([lo, hi, kind])

    if not groups:
        return BlockDecomposition(blocks=[Block(labels=list(j.labels), block_type=BlockType.CONSTANT, kernel=f)])

    members: List[List[Fraction]] = [[] for _ in groups]
    for label in j.labels:
        owner = 0
        for position, (lo, _, _) in enumerate(groups):
            if lo <= label:
                owner = position
        members[owner].append(label)

    blocks = [
        Block(labels=labels, block_type=kind, kernel=f.restrict(labels))
        for labels, (_, _, kind) in zip(members, groups)
    ]
    return BlockDecomposition(blocks=blocks)


def check_decomposition(f: Kernel, j: IndexSet, decomposition: BlockDecomposition) -> List[str]:
    """Names of the block conditions that fail; empty when the decomposition is valid."""
    failures = []
    blocks = decomposition.blocks
    flat = [label for block in blocks for label in block.labels]
    if sorted(flat) != list(j.labels) or len(flat) != len(set(flat)):
        failures.append("partition")
    order = j.positions
    for block in blocks:
        spots = [order[label] for label in block.labels]
        if spots != list(range(min(spots), max(spots) + 1)):
            failures.append("convex")
            break
    if any(a.labels[-1] >= b.labels[0] for a, b in zip(blocks, blocks[1:])):
        failures.append("ordered")
    for block in blocks:
        inside = set(block.labels)
        if any((i in inside) != (fi in inside) for i, fi in f.pairs):
            failures.append("closed")
            break
    for block in blocks:
        pairs = block.kernel.pairs
        if block.block_type == BlockType.INCREASING and not all(i < fi for i, fi in pairs):
            failures.append("type")
        if block.block_type == BlockType.DECREASING and not all(i > fi for i, fi in pairs):
            failures.append("type")
        if block.block_type == BlockType.CONSTANT:
            if not all(i == fi for i, fi in pairs):
                failures.append("type")
            moving = (block.kernel.domain | block.kernel.range)
            if len(moving) > 1:
                failures.append("constant_singleton")
    if set().union(*(block.kernel.pairs for block in blocks)) != f.pairs:
        failures.append("kernel_union")
    return failures


# --- Extension of an increasing-orbit kernel ---

def _validate_increasing(f: Kernel):
    if not f.pairs:
        raise EmptyKernel("The extension needs a nonempty kernel.")
    backwards = [(i, fi) for i, fi in f.pairs if not i < fi]
    if backwards:
        raise NotIncreasingOrbits(f"Pairs {sorted(backwards)} do not move upwards.")
    _check_order_preserving(f)


def extend_star(f: Kernel, j: Optional[IndexSet] = None) -> KernelExtension:
    """
    Enlarge (J, f) with fresh rational labels until the orbit of beta_0 = min I runs from
    min J~ to max J~. J is first replaced by Dom(f) and Rg(f).
    """
    _validate_increasing(f)
    if j is not None:
        _check_labels(f, j)

    mapping: Dict[Fraction, Fraction] = dict(f.mapping)
    labels = set(f.domain | f.range)
    beta0 = min(f.generators)

    def chain_from_beta0() -> List[Fraction]:
        chain = [beta0]
        while chain[-1] in mapping:
            chain.append(mapping[chain[-1]])
        return chain

    def measure(end: Fraction) -> int:
        return sum(1 for label in labels if label > end)

    chain = chain_from_beta0()
    while chain[-1] != max(labels):
        end = chain[-1]
        before = measure(end)
        inverse = {target: source for source, target in mapping.items()}
        i = min(target for target in mapping.values() if target > end)
        pre_i = inverse[i]

        if pre_i < end:
            end_prime = end
        else:
            successor = min(label for label in labels if label > pre_i)
            y = (pre_i + successor) / 2
            mapping[end] = y
            labels.add(y)
            end_prime = y

        # sigma(end_prime): above every f-image of a smaller label, below every f-image of a
        # larger one, and off the current labels.
        floor = max(mapping[x] for x in mapping if x < end_prime)
        above = [label for label in labels if label > floor]
        image = (floor + min(above)) / 2 if above else floor + 1
        mapping[end_prime] = image
        labels.add(image)

        chain = chain_from_beta0()
        if measure(chain[-1]) >= before:
            raise RuntimeError("The extension failed to make progress.")

    extension = KernelExtension(
        labels=IndexSet(labels=sorted(labels)),
        kernel=Kernel(pairs=frozenset(mapping.items())),
        beta0=beta0,
        n_beta0=len(chain) - 1,
        chain=chain,
    )
    logger.debug(f"Extended {f!r} to {extension.kernel!r}.")
    return extension


def check_extension(f: Kernel, extension: KernelExtension) -> List[str]:
    """Independent re-check of the extension conditions; returns the failing ones."""
    failures = []
    original = f.domain | f.range
    big = extension.kernel
    labels = set(extension.labels.labels)
    if not original <= labels:
        failures.append("contains_J")
    if big.restrict(original).pairs != f.pairs:
        failures.append("restricts_to_f")
    if sorted(big.domain - big.range) != f.generators:
        failures.append("same_generators")
    if min(labels) != extension.beta0:
        failures.append("beta0_is_min")
    if not all(i < fi for i, fi in big.pairs) or not big.is_order_preserving():
        failures.append("increasing_order_preserving")
    current = extension.beta0
    for _ in range(extension.n_beta0):
        current = big.mapping.get(current)
        if current is None:
            break
    if current != max(labels) or current in big.mapping:
        failures.append("star")
    return failures


def minimal_k(f: Kernel) -> int:
    """
    The least k admitted by the recursive intertwined construction: at every level the
    extended chain length n~ of the chosen generator needs n~ + 1 < k.
    """
    _validate_increasing(f)
    k = 1
    current = f
    while current.pairs:
        extension = extend_star(current)
        k = max(k, extension.n_beta0 + 2)
        for beta, n in classify(current, IndexSet(labels=current.support)).n_beta.items():
            k = max(k, n + 2)
        rest = set(extension.labels.labels) - set(extension.chain)
        current = extension.kernel.restrict(rest)
    return k


# --- Seeded generators for randomized checks ---

def random_partial_injection(size: int, rng: random.Random) -> Kernel:
    labels = list(range(size))
    domain = [label for label in labels if rng.random() < 0.6]
    targets = rng.sample(labels, len(domain))
    return Kernel(pairs=frozenset(zip(domain, targets)))


def random_order_preserving_kernel(size: int, rng: random.Random, increasing_only: bool = False) -> Kernel:
    """A random order-preserving partial injection on range(size); never the identity."""
    if size < 2:
        raise ValueError("Random kernels need at least two labels.")
    while True:
        t = rng.randint(1, size - 1)
        domain = sorted(rng.sample(range(size), t))
        targets = sorted(rng.sample(range(size), t))
        pairs = list(zip(domain, targets))
        if increasing_only and not all(i < fi for i, fi in pairs):
            continue
        kernel = Kernel(pairs=frozenset(pairs))
        if not kernel.is_identity_on(IndexSet.range(size)):
            return kernel


def random_increasing_kernel(size: int, rng: random.Random) -> Kernel:
    return random_order_preserving_kernel(size, rng, increasing_only=True)
