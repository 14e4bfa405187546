"""
Thread configuration recommendations.

The guideline sets the number of inter-op pools to the average graph width
and splits the physical cores evenly between the pools, giving each pool the
same number of intra-op and kernel threads so the two share a core as SMT
siblings. The presets reproduce the framework and vendor recommendations the
guideline is compared against.
"""

import logging
from typing import Literal

from .models import (
    HardwareSpec,
    Recommendation,
    RecommendationBasis,
    ThreadConfig,
    WidthReport,
)

logger = logging.getLogger(__name__)

PresetKind = Literal["tensorflow", "intel", "default"]

PRESET_KINDS: tuple[PresetKind, ...] = ("tensorflow", "intel", "default")

_PRESET_BASIS = {
    "tensorflow": RecommendationBasis.PRESET_TENSORFLOW,
    "intel": RecommendationBasis.PRESET_INTEL,
    "default": RecommendationBasis.PRESET_DEFAULT,
}

_PRESET_ALIASES = {"tf": "tensorflow"}


def recommend(width: WidthReport, hw: HardwareSpec) -> Recommendation:
    """
    Guideline configuration for a graph of the given width.

    Pools are capped at the physical core count so that every pool keeps a
    core of its own on graphs wider than the machine.
    """
    pools = max(1, min(width.avg_width, hw.physical_cores))
    threads = max(1, hw.physical_cores // pools)
    rationale = (
        f"avg_width {width.avg_width} = floor({width.heavy_count} heavy ops / "
        f"depth {width.heavy_depth}), max_width {width.max_width}; "
        f"{pools} pool(s) x {threads} intra-op and kernel threads "
        f"over {hw.physical_cores} physical cores"
    )
    logger.debug("Guideline recommendation: %s", rationale)
    return Recommendation(
        config=ThreadConfig(pools=pools, intra_threads=threads, kernel_threads=threads),
        basis=RecommendationBasis.GUIDELINE,
        rationale=rationale,
    )


def preset(kind: str, hw: HardwareSpec) -> Recommendation:
    """
    Preset configuration for a hardware spec.

    Args:
        kind: "tensorflow" (or "tf"), "intel" or "default"
        hw: Hardware spec

    Raises:
        ValueError: Unknown preset kind
    """
    kind = _PRESET_ALIASES.get(kind, kind)
    if kind == "tensorflow":
        config = ThreadConfig(
            pools=hw.sockets,
            intra_threads=hw.physical_cores,
            kernel_threads=hw.physical_cores,
        )
        rationale = "pools = sockets; intra-op and kernel threads = physical cores"
    elif kind == "intel":
        config = ThreadConfig(
            pools=hw.sockets,
            intra_threads=hw.cores_per_socket,
            kernel_threads=hw.cores_per_socket,
        )
        rationale = "pools = sockets; intra-op and kernel threads = cores per socket"
    elif kind == "default":
        config = ThreadConfig(
            pools=hw.logical_cores,
            intra_threads=hw.logical_cores,
            kernel_threads=hw.logical_cores,
        )
        rationale = "pools, intra-op and kernel threads = logical cores"
    else:
        raise ValueError(f"Unknown preset '{kind}', expected one of {PRESET_KINDS}")
    return Recommendation(config=config, basis=_PRESET_BASIS[kind], rationale=rationale)


def all_presets(hw: HardwareSpec) -> list[Recommendation]:
    return [preset(kind, hw) for kind in PRESET_KINDS]


def is_oversubscribed(config: ThreadConfig, hw: HardwareSpec) -> bool:
    """
    Whether a configuration over-threads the machine.

    Each pool needs at least one physical core of its own, and the software
    threads must fit the hardware thread slots.
    """
    return config.pools > hw.physical_cores or config.software_threads > hw.thread_slots
