"""
Graph core: parsing, validation, ordering and serialization of operator DAGs.

Graph and hardware files are JSON documents. Unknown fields are rejected and
numeric fields must be finite and non-negative.
"""

import json
import logging
from collections.abc import Iterable
from typing import Any

import networkx as nx
from pydantic import ValidationError

from .exceptions import GraphSyntaxError, GraphValidationError
from .models import Graph, HardwareSpec

logger = logging.getLogger(__name__)


def _loads(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphSyntaxError(
            f"Malformed {what} JSON: {e.msg}",
            location=f"line {e.lineno}, column {e.colno}",
        ) from e


def _location(error: dict[str, Any]) -> str:
    return ".".join(str(part) for part in error["loc"]) or "<root>"


def _from_validation_error(what: str, e: ValidationError) -> GraphSyntaxError:
    first = e.errors()[0]
    return GraphSyntaxError(
        f"Invalid {what}: {first['msg']}",
        location=_location(first),
        details={"errors": [f"{_location(err)}: {err['msg']}" for err in e.errors()]},
    )


def parse_graph(text: str) -> Graph:
    """
    Parse graph text into a validated Graph.

    Raises:
        GraphSyntaxError: Malformed JSON, missing or unknown fields, or a
            negative / non-finite cost
        GraphValidationError: Any structural violation reported by `validate`
    """
    data = _loads(text, "graph")
    try:
        graph = Graph.model_validate(data)
    except ValidationError as e:
        raise _from_validation_error("graph", e) from e
    return validate(graph)


def serialize_graph(graph: Graph) -> str:
    """Canonical JSON text for a graph; `parse_graph` inverts it."""
    payload = {
        "name": graph.name,
        "nodes": [node.model_dump(mode="json") for node in graph.nodes],
        "edges": [list(edge) for edge in graph.edges],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def parse_hardware(text: str) -> HardwareSpec:
    """Parse hardware text into a HardwareSpec."""
    data = _loads(text, "hardware")
    try:
        return HardwareSpec.model_validate(data)
    except ValidationError as e:
        raise _from_validation_error("hardware spec", e) from e


def serialize_hardware(hw: HardwareSpec) -> str:
    return json.dumps(hw.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def validate(graph: Graph) -> Graph:
    """
    Check the structural invariants of a graph.

    Every violation is collected and reported together, each message naming
    the offending node or edge.

    Returns:
        The same graph, for chaining

    Raises:
        GraphValidationError: Duplicate ids, dangling or repeated edges, or a cycle
    """
    errors: list[str] = []
    ids: set[str] = set()
    for node in graph.nodes:
        if node.id in ids:
            errors.append(f"Duplicate node id '{node.id}'")
        ids.add(node.id)

    seen_edges: set[tuple[str, str]] = set()
    digraph = nx.DiGraph()
    digraph.add_nodes_from(ids)
    for src, dst in graph.edges:
        dangling = [end for end in (src, dst) if end not in ids]
        if dangling:
            errors.append(
                f"Edge {src} -> {dst} references unknown node(s) "
                + ", ".join(f"'{end}'" for end in dangling)
            )
            continue
        if (src, dst) in seen_edges:
            errors.append(f"Duplicate edge {src} -> {dst}")
            continue
        seen_edges.add((src, dst))
        if src == dst:
            errors.append(f"Cycle detected: self-edge on node '{src}'")
            continue
        digraph.add_edge(src, dst)

    try:
        cycle = nx.find_cycle(digraph)
    except nx.NetworkXNoCycle:
        pass
    else:
        path = [src for src, _ in cycle] + [cycle[0][0]]
        errors.append("Cycle detected: " + " -> ".join(path))

    if errors:
        raise GraphValidationError(errors, f"Graph '{graph.name}' is invalid")

    logger.debug(
        "Validated graph %s (%d nodes, %d edges)",
        graph.name, len(graph.nodes), len(graph.edges),
    )
    return graph


def to_networkx(graph: Graph) -> nx.DiGraph:
    """Directed networkx view of a graph; node attributes hold the Node."""
    digraph = nx.DiGraph(name=graph.name)
    for node in graph.nodes:
        digraph.add_node(node.id, node=node)
    digraph.add_edges_from(graph.edges)
    return digraph


def topological_order(graph: Graph) -> list[str]:
    """Node ids in dependency order; independent nodes ordered by id."""
    return list(nx.lexicographical_topological_sort(to_networkx(graph)))


def predecessors(graph: Graph) -> dict[str, list[str]]:
    """Direct predecessors of every node, sorted by id."""
    preds: dict[str, list[str]] = {node.id: [] for node in graph.nodes}
    for src, dst in graph.edges:
        preds[dst].append(src)
    return {node_id: sorted(ids) for node_id, ids in preds.items()}


def successors(graph: Graph) -> dict[str, list[str]]:
    """Direct successors of every node, sorted by id."""
    succs: dict[str, list[str]] = {node.id: [] for node in graph.nodes}
    for src, dst in graph.edges:
        succs[src].append(dst)
    return {node_id: sorted(ids) for node_id, ids in succs.items()}


def subgraph(graph: Graph, node_ids: Iterable[str], name: str = "") -> Graph:
    """Graph induced by a subset of node ids."""
    keep = set(node_ids)
    return Graph(
        name=name or f"{graph.name}-sub",
        nodes=tuple(node for node in graph.nodes if node.id in keep),
        edges=tuple(edge for edge in graph.edges if edge[0] in keep and edge[1] in keep),
    )
