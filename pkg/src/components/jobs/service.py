# src/components/jobs/service.py

import logging
from pathlib import Path
from typing import Any, Dict, Tuple

from pydantic import ValidationError

from src.components.canon.models import RelationOracle
from src.components.canon.service import (
    CanonService,
    constant_oracle,
    coordinate_oracle,
    is_sidon,
    partition_oracle,
    sum_oracle,
    verify_canonical_form,
)
from src.components.chroma.constructions import (
    binary_strings,
    cycle_coloring,
    eh_pair_coloring,
    recursive_shift_coloring,
)
from src.components.chroma.models import Coloring, ColoredGraph
from src.components.chroma.service import ChromaService
from src.components.embed.models import VertexMap
from src.components.embed.service import EmbedService
from src.components.embed.verify import planted_homomorphism
from src.components.families.models import Graph
from src.components.families.service import (
    bounded_glued,
    cyclic_sym,
    directed_shift,
    graph_from_edges,
    graph_from_kernel,
    shift_graph,
)
from src.components.kernel_analysis.service import (
    check_extension,
    classify,
    decompose_ordered,
    extend_star,
    minimal_k,
)
from src.components.tuplespace.service import integer_range
from src.core.config import Settings
from src.core.models.errors import (
    EmptyKernel,
    NotIncreasingOrbits,
    NotOrderPreserving,
    ShiftLabError,
    VerificationFailed,
)
from src.core.models.ontology import Construction, ExitCode, Side, Subcommand
from src.core.monitoring.service import RunMonitor
from src.core.utils.dimacs import from_dimacs, to_dimacs
from src.core.utils.serialization import load_model, read_json, write_json

from .models import JobResult, JobSpec, KernelText, parse_index_set, parse_int_list

logger = logging.getLogger(__name__)

Outcome = Tuple[Dict[str, Any], ExitCode]


def load_graph(path: str) -> Graph:
    """Native JSON graphs, or DIMACS .col files read as plain integer-labelled graphs."""
    if Path(path).suffix == ".col":
        n, edges = from_dimacs(Path(path).read_text(encoding="utf-8"))
        return graph_from_edges(n, edges, name="dimacs", params={"source": Path(path).name})
    return load_model(path, Graph)


class JobRunner:
    """Runs one batch job: dispatches on the subcommand, writes artifacts, maps failures to exit codes."""

    def __init__(
        self,
        settings: Settings,
        monitor: RunMonitor,
        chroma: ChromaService,
        embed: EmbedService,
        canon: CanonService,
    ):
        self.settings = settings
        self.monitor = monitor
        self.chroma = chroma
        self.embed = embed
        self.canon = canon
        self._handlers = {
            Subcommand.GEN: self._gen,
            Subcommand.ANALYZE: self._analyze,
            Subcommand.CHI: self._chi,
            Subcommand.COLOR: self._color,
            Subcommand.EMBED: self._embed,
            Subcommand.CANON: self._canon,
            Subcommand.VERIFY: self._verify,
        }
        logger.info("JobRunner initialized.")

    def run(self, spec: JobSpec) -> JobResult:
        logger.debug(f"Running job {spec.model_dump_json()}")
        try:
            artifact, code = self._handlers[spec.subcommand](spec)
            result = JobResult(exit_code=code, artifact=artifact)
        except VerificationFailed as error:
            logger.error(f"Verification failed: {error}")
            report = error.report.model_dump(mode="json") if hasattr(error.report, "model_dump") else error.report
            result = JobResult(
                exit_code=ExitCode.VERIFICATION_FAILED,
                artifact={"error": str(error), "report": report},
                message=str(error),
            )
        except (ShiftLabError, ValidationError, ValueError, KeyError, FileNotFoundError) as error:
            logger.error(f"{spec.subcommand.value} refused: {type(error).__name__}: {error}")
            result = JobResult(exit_code=ExitCode.USAGE, message=f"{type(error).__name__}: {error}")

        if spec.output and result.artifact is not None:
            result.written.append(str(write_json(spec.output, result.artifact)))
        self.monitor.log_event("job", {
            "subcommand": spec.subcommand.value,
            "exit_code": int(result.exit_code),
            "output": spec.output,
        })
        return result

    # --- Handlers ---

    def _gen(self, spec: JobSpec) -> Outcome:
        family = spec.option("family", "sh")
        r, n = spec.option("r", 2), spec.option("n", 4)
        if family == "sh":
            g = shift_graph(r, n)
        elif family == "shsym":
            g = shift_graph(r, n, symmetric=True)
        elif family in ("lsh", "rsh"):
            g = directed_shift(r, n, Side.LEFT if family == "lsh" else Side.RIGHT)
        elif family == "cyc":
            g = cyclic_sym(r, n)
        elif family == "glued":
            g = bounded_glued(parse_int_list(spec.option("nbar")), n)
        elif family == "kernel":
            f = KernelText(text=spec.option("kernel", "")).to_kernel()
            j = parse_index_set(spec.option("j"), f)
            g = graph_from_kernel(
                integer_range(spec.option("ground", n)), j, f,
                increasing=not spec.option("injective", False),
                directed=spec.option("directed", False),
            )
        else:
            raise ValueError(f"Unknown family '{family}'.")
        logger.info(f"Generated {family}: {g.n} vertices, {len(g.edges)} edges.")
        dimacs = spec.option("dimacs")
        if dimacs:
            Path(dimacs).write_text(to_dimacs(g.n, g.edges, comment=f"{family} {g.family.params}"), encoding="utf-8")
        return g.model_dump(mode="json"), ExitCode.OK

    def _analyze(self, spec: JobSpec) -> Outcome:
        f = KernelText(text=spec.option("kernel", "")).to_kernel()
        j = parse_index_set(spec.option("j"), f)
        artifact: Dict[str, Any] = {
            "kernel": f.model_dump(),
            "j": j.model_dump(),
            "orbits": classify(f, j).model_dump(mode="json"),
        }
        try:
            artifact["blocks"] = decompose_ordered(f, j).model_dump(mode="json")
        except NotOrderPreserving as error:
            artifact["blocks"] = {"refused": str(error)}
        try:
            extension = extend_star(f, j)
            artifact["extension"] = extension.model_dump(mode="json")
            artifact["extension_failures"] = check_extension(f, extension)
            artifact["minimal_k"] = minimal_k(f)
        except (EmptyKernel, NotIncreasingOrbits, NotOrderPreserving) as error:
            artifact["extension"] = {"refused": f"{type(error).__name__}: {error}"}
        return artifact, ExitCode.OK

    def _chi(self, spec: JobSpec) -> Outcome:
        g = load_graph(spec.inputs[0])
        method = spec.option("method", "exact")
        budget = spec.time_budget
        if method == "greedy":
            coloring = self.chroma.chi_greedy(g, spec.option("strategy", "dsatur"))
            self._require_proper(g, coloring)
            return {"method": "greedy", "palette": coloring.palette_size, "witness": coloring.model_dump()}, ExitCode.OK

        report = self.chroma.chi_exact(g, budget)
        self._require_proper(g, report.witness)
        artifact = {"method": "branch_and_bound", "report": report.model_dump(mode="json")}
        exact = report.exact
        if method == "cross-check":
            second = self.chroma.chi_by_decision(g, budget)
            self._require_proper(g, second.witness)
            artifact["second"] = second.model_dump(mode="json")
            exact = exact and second.exact
            if exact and second.chi != report.chi:
                raise VerificationFailed(f"Exact methods disagree: {report.chi} vs {second.chi}.", report=artifact)
        elif method != "exact":
            raise ValueError(f"Unknown chi method '{method}'.")
        return artifact, ExitCode.OK if exact else ExitCode.TIMEOUT

    def _color(self, spec: JobSpec) -> Outcome:
        name = spec.option("name")
        if name == "eh":
            colored = eh_pair_coloring(binary_strings(spec.option("m", 3)))
        elif name == "recursive":
            colored = recursive_shift_coloring(
                spec.option("r", 3), spec.option("m", 1),
                tower_guard=self.settings.tower_guard, max_vertices=self.settings.max_vertices,
            )
        elif name == "cycle":
            r = spec.option("r", 4)
            g = cyclic_sym(r, spec.option("n", r))
            colored = ColoredGraph(graph=g, coloring=cycle_coloring(g))
        else:
            raise ValueError(f"Unknown coloring '{name}'.")
        self._require_proper(colored.graph, colored.coloring)
        return colored.model_dump(mode="json"), ExitCode.OK

    def _embed(self, spec: JobSpec) -> Outcome:
        construction = Construction(spec.option("construction"))
        window = spec.option("window")
        if construction == Construction.PIPELINE:
            if spec.inputs:
                t = load_model(spec.inputs[0], VertexMap)
            else:
                t = planted_homomorphism(spec.option("k", 3), spec.option("n", 10), parse_int_list(spec.option("coords")))
            result = self.embed.pipeline(t, self.canon, window)
            artifact = result.model_dump(mode="json")
            if spec.option("verify", False):
                artifact["report"] = self.embed.verify(result.embedding).model_dump()
            return artifact, ExitCode.OK

        directed = construction in (Construction.INTERTWINED, Construction.ORDERED)
        if construction == Construction.BOUNDED:
            m = self.embed.bounded(parse_int_list(spec.option("nbar")), spec.option("n", window))
        else:
            f = KernelText(text=spec.option("kernel", "")).to_kernel()
            if construction == Construction.INTERTWINED:
                m = self.embed.intertwined(f, parse_index_set(spec.option("j"), f), spec.option("k"), window)
            elif construction == Construction.NO_ORDER:
                m = self.embed.no_order(f, parse_index_set(spec.option("j"), f), window)
            else:
                m = self.embed.ordered(f, spec.option("m", len(f.support)), spec.option("k"), window)
        artifact = m.model_dump(mode="json")
        if spec.option("verify", False):
            artifact["report"] = self.embed.verify(m, directed=directed).model_dump()
        return artifact, ExitCode.OK

    def _oracle(self, spec: JobSpec) -> RelationOracle:
        kind = spec.option("oracle", "coord")
        arity, ground = spec.option("arity", 2), spec.option("ground", 10)
        if kind == "coord":
            return coordinate_oracle(arity, ground, parse_int_list(spec.option("coords")))
        if kind == "sum":
            return sum_oracle(ground)
        if kind == "constant":
            return constant_oracle(arity, ground)
        if kind == "partition":
            document = read_json(spec.inputs[0])
            classes = {tuple(t): label for t, label in document["classes"]}
            return partition_oracle(document["arity"], document["ground"], classes)
        raise ValueError(f"Unknown oracle '{kind}'.")

    def _canon(self, spec: JobSpec) -> Outcome:
        oracle = self._oracle(spec)
        target = spec.option("target", oracle.ground)
        form = self.canon.canonize(oracle, target)
        artifact: Dict[str, Any] = {"oracle": oracle.name, "target": target, "found": form is not None}
        if form is None:
            return artifact, ExitCode.OK
        violations = verify_canonical_form(oracle, form)
        if violations:
            raise VerificationFailed(f"Canonical form fails on {violations[:3]}.", report=artifact)
        artifact["form"] = form.model_dump()
        artifact["nodes_explored"] = form.nodes_explored
        if oracle.name == "sum":
            artifact["sidon"] = is_sidon(form.N)
        return artifact, ExitCode.OK

    def _verify(self, spec: JobSpec) -> Outcome:
        sweep = spec.option("sweep")
        if sweep:
            outcomes = self.embed.soundness_sweep(sweep, spec.seed)
            failures = [o for o in outcomes if not o.passed]
            artifact = {
                "samples": sweep,
                "seed": spec.seed,
                "checks": len(outcomes),
                "failures": [o.model_dump() for o in failures],
            }
            return artifact, ExitCode.VERIFICATION_FAILED if failures else ExitCode.OK
        g = load_graph(spec.inputs[0])
        coloring = load_model(spec.inputs[1], Coloring)
        violations = self.chroma.validate(g, coloring)
        artifact = {"proper": not violations, "violations": [list(e) for e in violations]}
        return artifact, ExitCode.VERIFICATION_FAILED if violations else ExitCode.OK

    def _require_proper(self, g: Graph, coloring: Coloring):
        violations = self.chroma.validate(g, coloring)
        if violations:
            raise VerificationFailed(f"Coloring has {len(violations)} monochromatic edges.", report={"violations": violations[:10]})
