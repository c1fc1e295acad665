# src/components/jobs/commands.py

import os
from typing import Any, Dict, List, Optional

import click

from src.core.config import get_settings
from src.core.dependencies import runner_for
from src.core.logging_config import setup_logging
from src.core.models.ontology import Subcommand
from src.core.utils.serialization import to_json

from .models import JobSpec


@click.group()
@click.option("--seed", type=int, default=None, help="Seed for every randomized step (default 0).")
@click.option("--threads", type=int, default=None, help="Worker processes; SHIFTLAB_THREADS takes precedence.")
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR.")
@click.option("--log-file", type=click.Path(dir_okay=False), default=None)
@click.option("--log-json/--no-log-json", default=None, help="Emit log records as JSON lines.")
@click.pass_context
def cli(ctx, seed, threads, log_level, log_file, log_json):
    """Shift graphs, kernel graphs and their colorings."""
    overrides: Dict[str, Any] = {}
    if seed is not None:
        overrides["seed"] = seed
    if threads is not None and "SHIFTLAB_THREADS" not in os.environ:
        overrides["threads"] = threads
    for name, value in (("log_level", log_level), ("log_file", log_file), ("log_json", log_json)):
        if value is not None:
            overrides[name] = value
    settings = get_settings().model_copy(update=overrides)
    setup_logging(settings.log_level, settings.log_file, settings.log_json)
    ctx.obj = {"settings": settings}


def _run(ctx, subcommand: Subcommand, inputs: List[str], output: Optional[str], time_budget=None, **options):
    settings = ctx.obj["settings"]
    spec = JobSpec(
        subcommand=subcommand,
        inputs=inputs,
        output=output,
        options={name: value for name, value in options.items() if value is not None},
        seed=settings.seed,
        time_budget=time_budget,
    )
    result = runner_for(settings).run(spec)
    if result.artifact is not None and not output:
        click.echo(to_json(result.artifact), nl=False)
    if result.message:
        click.echo(result.message, err=True)
    ctx.exit(int(result.exit_code))


@cli.command()
@click.option("--family", type=click.Choice(["sh", "shsym", "lsh", "rsh", "cyc", "glued", "kernel"]), default="sh")
@click.option("--r", "r", type=int, default=2)
@click.option("--n", "n", type=int, default=4)
@click.option("--nbar", default=None, help="Block lengths for the glued family, e.g. 1,2.")
@click.option("--kernel", default=None, help='Kernel pairs, e.g. "0:1,1:2".')
@click.option("--j", "j", default=None, help="Index set size or label list.")
@click.option("--ground", type=int, default=None)
@click.option("--injective", is_flag=True, default=False)
@click.option("--directed", is_flag=True, default=False)
@click.option("--dimacs", type=click.Path(dir_okay=False), default=None, help="Also write a DIMACS .col file.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def gen(ctx, out, **options):
    """Generate a graph family member."""
    _run(ctx, Subcommand.GEN, [], out, **options)


@cli.command()
@click.option("--kernel", required=True)
@click.option("--j", "j", default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def analyze(ctx, out, **options):
    """Orbit, block and extension reports for a kernel."""
    _run(ctx, Subcommand.ANALYZE, [], out, **options)


@cli.command()
@click.argument("graph", type=click.Path(exists=True, dir_okay=False))
@click.option("--exact", "method", flag_value="exact", default=True)
@click.option("--greedy", "method", flag_value="greedy")
@click.option("--cross-check", "method", flag_value="cross-check")
@click.option("--strategy", default=None, help="Greedy strategy name.")
@click.option("--timeout", type=float, default=None, help="Seconds for each exact method.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def chi(ctx, graph, out, timeout, **options):
    """Chromatic number of a .json or .col graph."""
    _run(ctx, Subcommand.CHI, [graph], out, time_budget=timeout, **options)


@cli.command()
@click.option("--name", type=click.Choice(["eh", "recursive", "cycle"]), required=True)
@click.option("--m", "m", type=int, default=None)
@click.option("--r", "r", type=int, default=None)
@click.option("--n", "n", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def color(ctx, out, **options):
    """Build and validate one of the named colorings."""
    _run(ctx, Subcommand.COLOR, [], out, **options)


@cli.command()
@click.option(
    "--construction",
    type=click.Choice(["bounded", "intertwined", "no-order", "ordered", "pipeline"]),
    required=True,
)
@click.option("--nbar", default=None)
@click.option("--n", "n", type=int, default=None)
@click.option("--kernel", default=None)
@click.option("--j", "j", default=None)
@click.option("--m", "m", type=int, default=None)
@click.option("--k", "k", type=int, default=None)
@click.option("--window", type=int, default=None)
@click.option("--coords", default=None, help="Planted coordinate set for the pipeline.")
@click.option("--map", "map_file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--verify", is_flag=True, default=False)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def embed(ctx, out, map_file, **options):
    """Run one embedding construction."""
    _run(ctx, Subcommand.EMBED, [map_file] if map_file else [], out, **options)


@cli.command()
@click.option("--oracle", type=click.Choice(["coord", "sum", "constant", "partition"]), default="coord")
@click.option("--arity", type=int, default=None)
@click.option("--ground", type=int, default=None)
@click.option("--coords", default=None)
@click.option("--target", type=int, default=None)
@click.option("--partition", "partition_file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def canon(ctx, out, partition_file, **options):
    """Canonize an equivalence relation on increasing tuples."""
    _run(ctx, Subcommand.CANON, [partition_file] if partition_file else [], out, **options)


@cli.command()
@click.option("--graph", "graph_file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--coloring", "coloring_file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--sweep", type=int, default=None, help="Run the embedding soundness sweep on N samples.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def verify(ctx, graph_file, coloring_file, sweep, out):
    """Validate a coloring file, or run the embedding soundness sweep."""
    if sweep is None and not (graph_file and coloring_file):
        raise click.UsageError("Pass --graph and --coloring, or --sweep N.")
    inputs = [graph_file, coloring_file] if sweep is None else []
    _run(ctx, Subcommand.VERIFY, inputs, out, sweep=sweep)

