# src/components/embed/service.py

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

from tqdm import tqdm

from src.components.canon.service import CanonService
from src.components.kernel_analysis.service import (
    classify,
    minimal_k,
    random_increasing_kernel,
    random_order_preserving_kernel,
)
from src.components.tuplespace.models import IndexSet, Kernel
from src.core.config import Settings
from src.core.models.errors import ShiftLabError, VerificationFailed
from src.core.models.ontology import Construction
from src.core.monitoring.service import RunMonitor

from .constructions import embed_bounded, embed_intertwined, embed_no_order, embed_ordered, ordered_minimal_k
from .models import EmbedReport, PipelineResult, SweepOutcome, VertexMap
from .pipeline import pipeline_hom_to_subgraphs
from .verify import verify_map

logger = logging.getLogger(__name__)

SWEEP_MAX_K = 5
SWEEP_MAX_LABELS = 5


class EmbedService:
    """
    Builds the explicit embeddings of shift graphs into kernel graphs and checks every
    result with the map verifier before handing it out.
    """
    def __init__(self, settings: Settings, monitor: RunMonitor):
        self.settings = settings
        self.monitor = monitor
        logger.info("EmbedService initialized.")

    def _window(self, requested: Optional[int], floor: int) -> int:
        return requested if requested is not None else max(self.settings.verify_window, floor)

    def _checked(self, construction: Construction, m: VertexMap, directed: bool, details: dict) -> VertexMap:
        report = verify_map(m, directed=directed)
        passed = report.is_embedding
        self.monitor.log_verification(construction.value, passed, {
            "source_vertices": m.source.n,
            "target_vertices": m.target.n,
            "edges_checked": report.edges_checked,
            **details,
        })
        if not passed:
            raise VerificationFailed(f"The {construction.value} construction produced a bad map.", report=report)
        return m

    def verify(self, m: VertexMap, directed: bool = False) -> EmbedReport:
        return verify_map(m, directed=directed)

    def bounded(self, n_bar: Sequence[int], window: Optional[int] = None) -> VertexMap:
        w = self._window(window, max(n_bar) + 2)
        return self._checked(Construction.BOUNDED, embed_bounded(n_bar, w), False, {"n_bar": list(n_bar), "window": w})

    def intertwined(self, f: Kernel, j: IndexSet, k: Optional[int] = None, window: Optional[int] = None) -> VertexMap:
        k = k if k is not None else minimal_k(f)
        w = self._window(window, k + 2)
        m = embed_intertwined(f, j, k, w)
        return self._checked(Construction.INTERTWINED, m, True, {"kernel": repr(f), "k": k, "window": w})

    def no_order(self, f: Kernel, lam: IndexSet, window: Optional[int] = None) -> VertexMap:
        report = classify(f, lam)
        n = report.max_shift_length
        w = self._window(window, n + 2)
        m = embed_no_order(f, lam, w)
        return self._checked(Construction.NO_ORDER, m, False, {"kernel": repr(f), "window": w})

    def ordered(self, f: Kernel, m: int, k: Optional[int] = None, window: Optional[int] = None) -> VertexMap:
        k = k if k is not None else ordered_minimal_k(f, m)
        w = self._window(window, k + 2)
        result = embed_ordered(f, m, k, w)
        return self._checked(Construction.ORDERED, result, True, {"kernel": repr(f), "m": m, "k": k, "window": w})

    def pipeline(self, t: VertexMap, canon: CanonService, window: Optional[int] = None) -> PipelineResult:
        result = pipeline_hom_to_subgraphs(t, canon, window)
        self.monitor.log_verification(Construction.PIPELINE.value, True, {
            "index": result.index,
            "coordinates": result.coordinates,
            "certified_edges": result.certified_edges,
        })
        return result

    # --- Randomized soundness sweep ---

    def soundness_sweep(self, count: int, seed: Optional[int] = None) -> List[SweepOutcome]:
        """
        Draw `count` seeded kernels on at most five labels and run every construction that
        applies. Outcomes come back in sample order whatever the worker count.
        """
        seed = self.settings.seed if seed is None else seed
        jobs = [(seed, sample) for sample in range(count)]
        if self.settings.threads > 1 and count > 1:
            with ProcessPoolExecutor(max_workers=self.settings.threads) as pool:
                batches = list(tqdm(pool.map(_sweep_sample, jobs), total=count, desc="sweep", leave=False))
        else:
            batches = [_sweep_sample(job) for job in tqdm(jobs, desc="sweep", leave=False)]
        outcomes = [outcome for batch in batches for outcome in batch]
        failed = [o for o in outcomes if not o.passed]
        self.monitor.log_event("soundness_sweep", {
            "samples": count, "seed": seed, "checks": len(outcomes), "failures": len(failed),
        })
        return outcomes


def _sweep_sample(job) -> List[SweepOutcome]:
    seed, sample = job
    rng = random.Random(f"{seed}:{sample}")
    outcomes = []

    while True:
        size = rng.randint(2, SWEEP_MAX_LABELS)
        increasing = random_increasing_kernel(size, rng)
        k = minimal_k(increasing)
        if k <= SWEEP_MAX_K:
            break
    j = IndexSet.range(size)
    report = classify(increasing, j)
    n = report.max_shift_length

    def run(construction: Construction, kernel: Kernel, build):
        try:
            m, directed = build()
            check = verify_map(m, directed=directed)
            outcomes.append(SweepOutcome(
                sample=sample, construction=construction.value, kernel=kernel.model_dump(),
                passed=check.is_embedding, detail="; ".join(check.counterexamples[:3]),
            ))
        except ShiftLabError as error:
            outcomes.append(SweepOutcome(
                sample=sample, construction=construction.value, kernel=kernel.model_dump(),
                passed=False, detail=f"{type(error).__name__}: {error}",
            ))

    run(Construction.INTERTWINED, increasing, lambda: (embed_intertwined(increasing, j, k, k + 2), True))
    run(Construction.NO_ORDER, increasing, lambda: (embed_no_order(increasing, j, n + 2), False))
    run(Construction.BOUNDED, increasing, lambda: (embed_bounded(list(report.n_beta.values()), n + 2), False))

    while True:
        ordered = random_order_preserving_kernel(size, rng)
        k_ordered = ordered_minimal_k(ordered, size)
        if k_ordered <= SWEEP_MAX_K:
            break
    run(Construction.ORDERED, ordered, lambda: (embed_ordered(ordered, size, k_ordered, k_ordered + 2), True))
    return outcomes
