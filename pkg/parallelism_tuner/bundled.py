"""
Bundled example graphs and hardware specs.

The graph costs are synthetic: they are chosen so that the bundled models
keep the widths of the real networks they are named after and so that
compute dominates framework overhead on the bundled hardware.
"""

import logging
import re
from importlib import resources
from pathlib import Path
from typing import Union

from .exceptions import InputError
from .graph import parse_graph, parse_hardware
from .models import Graph, HardwareSpec, Node, OperatorKind

logger = logging.getLogger(__name__)

_CHAIN_PATTERN = re.compile(r"^chain-(\d+)$")

# Default per-op costs of generated chains
CHAIN_SERIAL_PREP = 1.0
CHAIN_PARALLEL_PREP = 500.0
CHAIN_FLOPS = 128000.0
CHAIN_BYTES = 2048.0


def _data_dir(kind: str):
    return resources.files("parallelism_tuner").joinpath("data", kind)


def _names(kind: str) -> list[str]:
    return sorted(
        entry.name[: -len(".json")]
        for entry in _data_dir(kind).iterdir()
        if entry.name.endswith(".json")
    )


def graph_names() -> list[str]:
    """Names of the bundled graphs."""
    return _names("graphs")


def hardware_names() -> list[str]:
    """Names of the bundled hardware specs."""
    return _names("hw")


def chain_graph(length: int) -> Graph:
    """A chain conv1 -> conv2 -> ... of `length` identical Conv operators."""
    if length < 1:
        raise InputError(f"Chain length must be at least 1, got {length}")
    nodes = [
        Node(
            id=f"conv{i}",
            kind=OperatorKind.CONV,
            serial_prep=CHAIN_SERIAL_PREP,
            parallel_prep=CHAIN_PARALLEL_PREP,
            flops=CHAIN_FLOPS,
            bytes=CHAIN_BYTES,
        )
        for i in range(1, length + 1)
    ]
    edges = [(f"conv{i}", f"conv{i + 1}") for i in range(1, length)]
    return Graph(name=f"chain-{length}", nodes=tuple(nodes), edges=tuple(edges))


def bundled_graph(name: str) -> Graph:
    """
    Load a bundled graph by name.

    `chain-<k>` is generated for any k >= 1.

    Raises:
        InputError: No bundled graph has that name
    """
    if name in graph_names():
        text = _data_dir("graphs").joinpath(f"{name}.json").read_text(encoding="utf-8")
        return parse_graph(text)
    match = _CHAIN_PATTERN.match(name)
    if match:
        return chain_graph(int(match.group(1)))
    raise InputError(
        f"Unknown graph '{name}'",
        {"available": graph_names() + ["chain-<k>"]},
    )


def bundled_hardware(name: str) -> HardwareSpec:
    """Load a bundled hardware spec by name."""
    if name not in hardware_names():
        raise InputError(f"Unknown hardware spec '{name}'", {"available": hardware_names()})
    text = _data_dir("hw").joinpath(f"{name}.json").read_text(encoding="utf-8")
    return parse_hardware(text)


def _read(source: Union[str, Path]) -> tuple[str, str]:
    """Text of a file and the name to fall back to when it does not exist."""
    path = Path(source)
    if path.is_file():
        return path.read_text(encoding="utf-8"), ""
    stem = path.name[: -len(".json")] if path.name.endswith(".json") else path.name
    return "", stem


def load_graph(source: Union[str, Path]) -> Graph:
    """
    Load and validate a graph from a file path or a bundled graph name.

    A path that does not exist is looked up among the bundled graphs by its
    stem, so `graphs/inception-module4.json` works from any directory.
    """
    text, stem = _read(source)
    if stem:
        logger.debug("Graph file %s not found, using bundled graph %s", source, stem)
        return bundled_graph(stem)
    return parse_graph(text)


def load_hardware(source: Union[str, Path]) -> HardwareSpec:
    """Load a hardware spec from a file path or a bundled hardware name."""
    text, stem = _read(source)
    if stem:
        logger.debug("Hardware file %s not found, using bundled spec %s", source, stem)
        return bundled_hardware(stem)
    return parse_hardware(text)
