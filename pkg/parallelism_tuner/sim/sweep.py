"""Exhaustive configuration sweep and comparison against the presets."""

import logging
from typing import Optional

from ..exceptions import InputError
from ..models import (
    ComparisonRow,
    Graph,
    HardwareSpec,
    SweepEntry,
    SweepResult,
    ThreadConfig,
)
from ..tuner import all_presets, is_oversubscribed, recommend
from ..width import width_report
from .engine import simulate

logger = logging.getLogger(__name__)


def sweep(graph: Graph, hw: HardwareSpec, max_pools: Optional[int] = None) -> SweepResult:
    """
    Simulate every non-oversubscribed configuration.

    Pools range over [1, max_pools] and per-pool threads over [1, physical
    cores] with pools x threads <= physical cores; intra-op and kernel
    threads are equal. Entries are sorted by makespan, then pools, then
    threads.

    Args:
        graph: Validated graph
        hw: Hardware spec
        max_pools: Largest pool count (default: physical cores)

    Raises:
        InputError: max_pools < 1
    """
    cores = hw.physical_cores
    max_pools = cores if max_pools is None else max_pools
    if max_pools < 1:
        raise InputError(f"max_pools must be at least 1, got {max_pools}")

    entries = []
    for pools in range(1, min(max_pools, cores) + 1):
        for threads in range(1, cores // pools + 1):
            config = ThreadConfig(pools=pools, intra_threads=threads, kernel_threads=threads)
            if is_oversubscribed(config, hw):
                continue
            entries.append(
                SweepEntry(config=config, makespan=simulate(graph, config, hw).makespan)
            )

    entries.sort(key=lambda e: (e.makespan, e.config.pools, e.config.intra_threads))
    result = SweepResult(entries=tuple(entries))
    logger.info(
        "Swept %d configurations of %s; best %s at %.6g",
        len(entries), graph.name, result.argmin.config.label(), result.argmin.makespan,
    )
    return result


def compare_presets(
    graph: Graph,
    hw: HardwareSpec,
    max_pools: Optional[int] = None,
    result: Optional[SweepResult] = None,
) -> list[ComparisonRow]:
    """
    Makespans of the guideline, the three presets and the sweep optimum.

    Presets that over-thread the machine are simulated with the penalized
    variant and flagged.
    """
    result = result or sweep(graph, hw, max_pools)
    best = result.argmin
    candidates: list[tuple[str, ThreadConfig]] = [
        ("guideline", recommend(width_report(graph), hw).config)
    ]
    candidates += [(rec.basis.value.replace("preset_", ""), rec.config) for rec in all_presets(hw)]

    rows = []
    for label, config in candidates:
        run = simulate(graph, config, hw, oversubscription="penalize")
        rows.append(_row(label, config, run.makespan, best.makespan, run.oversubscribed))
    rows.append(_row("argmin", best.config, best.makespan, best.makespan, False))
    return rows


def _row(
    label: str,
    config: ThreadConfig,
    makespan: float,
    best: float,
    oversubscribed: bool,
) -> ComparisonRow:
    return ComparisonRow(
        label=label,
        config=config,
        makespan=makespan,
        ratio_to_argmin=makespan / best if best > 0 else 1.0,
        oversubscribed=oversubscribed,
    )
