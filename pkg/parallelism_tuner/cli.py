"""
Command-line entry point (`partune`).

Subcommands:
    analyze GRAPH
    recommend GRAPH [--hw HW] [--preset tf|intel|default]
    simulate GRAPH [--hw HW] [--pools N] [--threads N] [--sync] [--placement P] [--trace CSV]
    sweep GRAPH [--hw HW] [--max-pools N] [--compare-presets]
    bench threadpool [--pool-sizes N ...] [--tasks N] [--naive]
    bench matmul [--sizes N ...] [--threads N] [--seed N] [--compare-designs]

GRAPH and HW are file paths or bundled names (e.g. graphs/inception-module4.json).
Exit codes: 0 success, 1 input error, 2 usage error.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from typing import Any, Optional

from .bundled import load_graph, load_hardware
from .config import Config
from .exceptions import FitError, InputError
from .graph import serialize_graph, serialize_hardware
from .models import (
    Graph,
    HardwareSpec,
    Placement,
    Report,
    ScheduleMode,
    SchedulePolicy,
    ThreadConfig,
)
from .report import FORMATS, build_report, render
from .sim import compare_presets, critical_path_bound, simulate, sweep, write_trace_csv
from .sim.export import CORE_HEADER
from .threadpool import Pool, SpawningPool, detect_physical_cores, microbench
from .tuner import is_oversubscribed, preset, recommend
from .utils import EXIT_INPUT_ERROR, EXIT_OK, setup_logging, write_atomic
from .width import width_report

logger = logging.getLogger(__name__)

DEFAULT_HARDWARE = "hw/two-socket-24.json"

_PLACEMENTS = {
    "single": Placement.SINGLE_SOCKET,
    "data": Placement.DATA_PARALLEL,
    "model": Placement.MODEL_PARALLEL,
}

Rendered = tuple[Report, Optional[Sequence[str]]]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _inputs(graph: Graph, hw: Optional[HardwareSpec] = None) -> dict[str, str]:
    inputs = {"graph": serialize_graph(graph)}
    if hw is not None:
        inputs["hardware"] = serialize_hardware(hw)
    return inputs


def _config_payload(config: ThreadConfig) -> dict[str, int]:
    return config.model_dump()


def cmd_analyze(args: argparse.Namespace) -> Rendered:
    graph = load_graph(args.graph)
    width = width_report(graph)
    results = {
        "graph": graph.name,
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "width": width.model_dump(),
    }
    return build_report("analyze", _inputs(graph), results), None


def cmd_recommend(args: argparse.Namespace) -> Rendered:
    graph = load_graph(args.graph)
    hw = load_hardware(args.hw)
    width = width_report(graph)
    rec = preset(args.preset, hw) if args.preset else recommend(width, hw)
    results = {
        "graph": graph.name,
        "width": width.model_dump(),
        "recommendation": rec.model_dump(mode="json"),
        "oversubscribed": is_oversubscribed(rec.config, hw),
    }
    return build_report("recommend", _inputs(graph, hw), results), None


def cmd_simulate(args: argparse.Namespace) -> Rendered:
    graph = load_graph(args.graph)
    hw = load_hardware(args.hw)
    if args.pools is None and args.threads is None:
        config = recommend(width_report(graph), hw).config
    else:
        pools = args.pools or 1
        threads = args.threads or max(1, hw.physical_cores // pools)
        config = ThreadConfig(pools=pools, intra_threads=threads, kernel_threads=threads)

    policy = SchedulePolicy(
        mode=ScheduleMode.SYNCHRONOUS if args.sync else ScheduleMode.ASYNCHRONOUS,
        placement=_PLACEMENTS[args.placement],
    )
    result = simulate(graph, config, hw, policy)
    if args.trace:
        write_trace_csv(result, args.trace)
        logger.info("Wrote trace of %d events to %s", len(result.trace), args.trace)

    results: dict[str, Any] = {
        "graph": graph.name,
        "policy": policy.model_dump(mode="json"),
        **result.summary(),
        "critical_path_bound": critical_path_bound(graph, hw),
        "rows": [core.model_dump() for core in result.per_core],
    }
    return build_report("simulate", _inputs(graph, hw), results), CORE_HEADER


def cmd_sweep(args: argparse.Namespace) -> Rendered:
    graph = load_graph(args.graph)
    hw = load_hardware(args.hw)
    result = sweep(graph, hw, args.max_pools)
    results: dict[str, Any] = {
        "graph": graph.name,
        "evaluated": len(result.entries),
        "argmin": {
            "config": _config_payload(result.argmin.config),
            "makespan": result.argmin.makespan,
        },
    }
    if args.compare_presets:
        results["rows"] = [
            {
                "label": row.label,
                "pools": row.config.pools,
                "intra_threads": row.config.intra_threads,
                "kernel_threads": row.config.kernel_threads,
                "makespan": row.makespan,
                "ratio_to_argmin": row.ratio_to_argmin,
                "oversubscribed": row.oversubscribed,
            }
            for row in compare_presets(graph, hw, args.max_pools, result)
        ]
    else:
        results["rows"] = [
            {
                "pools": entry.config.pools,
                "threads": entry.config.intra_threads,
                "makespan": entry.makespan,
            }
            for entry in result.entries
        ]
    return build_report("sweep", _inputs(graph, hw), results), None


def cmd_bench_threadpool(args: argparse.Namespace) -> Rendered:
    cores = detect_physical_cores()
    sizes = args.pool_sizes or [1, cores, 16 * cores]
    factory = SpawningPool if args.naive else Pool
    rows = [
        microbench(size, args.tasks, args.trials, pool_factory=factory).as_payload()
        for size in sizes
    ]
    results = {
        "pool": factory.__name__,
        "physical_cores": cores,
        "rows": rows,
    }
    return build_report("bench threadpool", {}, results, measured=True), None


def cmd_bench_matmul(args: argparse.Namespace) -> Rendered:
    from .oplab import design_bench, fit_amdahl, scaling_bench

    threads = args.threads or detect_physical_cores()
    rows = scaling_bench(args.sizes, threads, args.trials, args.seed)
    serial_fractions: dict[str, Optional[float]] = {}
    for row in rows:
        if row.threads > 1:
            try:
                serial_fractions[str(row.size)] = fit_amdahl(row.speedup, row.threads)
            except FitError:
                serial_fractions[str(row.size)] = None
    if args.compare_designs:
        rows += design_bench(args.design_size, threads, args.trials, args.seed)
    results = {
        "threads": threads,
        "seed": args.seed,
        "serial_fraction": serial_fractions,
        "rows": [row.model_dump() for row in rows],
    }
    header = ("size", "threads", "design", "latency_us", "speedup")
    return build_report("bench matmul", {}, results, measured=True), header


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="partune",
        description="Inter-op / intra-op / kernel thread tuning for operator graphs",
    )
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        default=None,
    )

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", choices=FORMATS, default=Config.DEFAULT_FORMAT)
    output.add_argument("--output", default=None, help="write the report to a file")

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("graph", help="graph file or bundled graph name")

    hardware = argparse.ArgumentParser(add_help=False)
    hardware.add_argument("--hw", default=DEFAULT_HARDWARE, help="hardware file or bundled name")

    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", parents=[graph, output], help="graph-width metrics")
    analyze.set_defaults(handler=cmd_analyze)

    rec = commands.add_parser("recommend", parents=[graph, hardware, output],
                              help="recommended thread configuration")
    rec.add_argument("--preset", choices=("tf", "tensorflow", "intel", "default"), default=None)
    rec.set_defaults(handler=cmd_recommend)

    sim = commands.add_parser("simulate", parents=[graph, hardware, output],
                              help="simulate one configuration")
    sim.add_argument("--pools", type=_positive_int, default=None)
    sim.add_argument("--threads", type=_positive_int, default=None,
                     help="intra-op and kernel threads per pool")
    sim.add_argument("--sync", action="store_true", help="synchronous scheduling")
    sim.add_argument("--placement", choices=tuple(_PLACEMENTS), default="single")
    sim.add_argument("--trace", default=None, help="write the trace CSV here")
    sim.set_defaults(handler=cmd_simulate)

    sw = commands.add_parser("sweep", parents=[graph, hardware, output],
                             help="exhaustive configuration sweep")
    sw.add_argument("--max-pools", type=_positive_int, default=None)
    sw.add_argument("--compare-presets", action="store_true")
    sw.set_defaults(handler=cmd_sweep)

    bench = commands.add_parser("bench", help="wall-clock benchmarks")
    benches = bench.add_subparsers(dest="bench", required=True)

    tp = benches.add_parser("threadpool", parents=[output], help="shared-counter microbenchmark")
    tp.add_argument("--pool-sizes", type=_positive_int, nargs="+", default=None)
    tp.add_argument("--tasks", type=_positive_int, default=None)
    tp.add_argument("--trials", type=_positive_int, default=None)
    tp.add_argument("--naive", action="store_true", help="measure the thread-per-batch pool")
    tp.set_defaults(handler=cmd_bench_threadpool)

    mm = benches.add_parser("matmul", parents=[output], help="MatMul operator scaling")
    mm.add_argument("--sizes", type=_positive_int, nargs="+", default=[256, 512, 1024, 2048])
    mm.add_argument("--threads", type=_positive_int, default=None)
    mm.add_argument("--seed", type=int, default=0, help="seed of the random matrices")
    mm.add_argument("--trials", type=_positive_int, default=None)
    mm.add_argument("--compare-designs", action="store_true")
    mm.add_argument("--design-size", type=_positive_int, default=512)
    mm.set_defaults(handler=cmd_bench_matmul)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_OK

    setup_logging(args.log_level)
    try:
        report, header = args.handler(args)
        text = render(report, args.format, header)
        if args.output:
            write_atomic(args.output, text)
            logger.info("Wrote %s report to %s", report.command, args.output)
        else:
            sys.stdout.write(text)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
