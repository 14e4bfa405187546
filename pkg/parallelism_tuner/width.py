"""
Graph-width analysis over heavy operators.

Light operators are transparent: a heavy node's level is one more than the
deepest heavy node that reaches it, through any number of light nodes.
"""

import logging
from collections import Counter

from .graph import predecessors, topological_order
from .models import Graph, Node, WidthReport
from .utils import HEAVY_KINDS

logger = logging.getLogger(__name__)


def classify_heavy(node: Node) -> bool:
    """True for compute-intensive and embedding operators."""
    return node.kind.value in HEAVY_KINDS


def heavy_levels(graph: Graph) -> dict[str, int]:
    """Longest-path level (1-based) of every heavy node."""
    preds = predecessors(graph)
    nodes = graph.node_map()
    depth: dict[str, int] = {}
    for node_id in topological_order(graph):
        reach = max((depth[pred] for pred in preds[node_id]), default=0)
        depth[node_id] = reach + 1 if classify_heavy(nodes[node_id]) else reach
    return {node.id: depth[node.id] for node in graph.nodes if classify_heavy(node)}


def heavy_depth(graph: Graph) -> int:
    return max(heavy_levels(graph).values(), default=0)


def max_width(graph: Graph) -> int:
    levels = heavy_levels(graph)
    if not levels:
        return 0
    return max(Counter(levels.values()).values())


def avg_width(graph: Graph) -> int:
    levels = heavy_levels(graph)
    depth = max(levels.values(), default=0)
    return len(levels) // depth if depth else 0


def width_report(graph: Graph) -> WidthReport:
    """All width metrics of a graph in one pass."""
    levels = heavy_levels(graph)
    depth = max(levels.values(), default=0)
    report = WidthReport(
        heavy_count=len(levels),
        heavy_depth=depth,
        max_width=max(Counter(levels.values()).values()) if levels else 0,
        avg_width=len(levels) // depth if depth else 0,
    )
    logger.debug("Width report for %s: %s", graph.name, report)
    return report
