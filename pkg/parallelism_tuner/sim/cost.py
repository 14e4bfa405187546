"""
Operator cost model.

An operator's time is split into a serial framework part run by one thread,
a data-preparation part divided across the intra-op threads, FMA-bound
compute divided across the kernel threads, and a dispatch/barrier overhead
linear in the number of participating threads. Threads beyond the physical
cores a pool owns are SMT siblings and add no throughput.
"""

from typing import NamedTuple, Optional

from ..graph import predecessors, topological_order
from ..models import Graph, HardwareSpec, Node


class OpCost(NamedTuple):
    """Phase breakdown of one operator execution on one pool."""

    serial: float
    prep: float
    compute: float
    overhead: float
    transfer: float
    prep_cores: int
    kernel_cores: int
    colocated: bool

    @property
    def duration(self) -> float:
        if self.colocated:
            body = max(self.prep, self.compute)
        else:
            body = self.prep + self.compute
        return self.serial + body + self.overhead + self.transfer

    def busy(self, rank: int) -> float:
        """Time the rank-th core of the pool spends executing.

        Everything else of the operator's duration is barrier and transfer
        waiting for that core.
        """
        prep = self.prep if rank < self.prep_cores else 0.0
        compute = self.compute if rank < self.kernel_cores else 0.0
        body = max(prep, compute) if self.colocated else prep + compute
        return (self.serial if rank == 0 else 0.0) + body

    def scaled(self, factor: float) -> "OpCost":
        return self._replace(
            serial=self.serial * factor,
            prep=self.prep * factor,
            compute=self.compute * factor,
            overhead=self.overhead * factor,
            transfer=self.transfer * factor,
        )


def op_cost(
    node: Node,
    intra: int,
    kernel: int,
    hw: HardwareSpec,
    smt_colocated: Optional[bool] = None,
    cores: Optional[int] = None,
    transfer: float = 0.0,
) -> OpCost:
    """
    Phase breakdown of `node` on a pool of `intra` intra-op and `kernel`
    kernel threads.

    Args:
        node: Operator
        intra: Intra-op threads (>= 1)
        kernel: Kernel threads (>= 1)
        hw: Hardware spec
        smt_colocated: Prep overlaps compute on SMT siblings (default: smt_ways >= 2)
        cores: Physical cores backing the pool (default: all physical cores)
        transfer: Inter-socket transfer time serialized into the operator

    Returns:
        OpCost
    """
    if intra < 1 or kernel < 1:
        raise ValueError(f"Thread counts must be positive, got intra={intra} kernel={kernel}")
    if smt_colocated is None:
        smt_colocated = hw.smt_ways >= 2
    cores = hw.physical_cores if cores is None else max(1, cores)
    prep_cores = min(intra, cores)
    kernel_cores = min(kernel, cores)
    return OpCost(
        serial=node.serial_prep,
        prep=node.parallel_prep / prep_cores,
        compute=node.flops / (hw.fma_rate * kernel_cores),
        overhead=hw.dispatch_overhead * (intra + kernel - 1),
        transfer=transfer,
        prep_cores=prep_cores,
        kernel_cores=kernel_cores,
        colocated=smt_colocated,
    )


def op_time(
    node: Node,
    intra: int,
    kernel: int,
    hw: HardwareSpec,
    smt_colocated: Optional[bool] = None,
    cores: Optional[int] = None,
) -> float:
    """Time of one operator execution; see `op_cost`."""
    return op_cost(node, intra, kernel, hw, smt_colocated, cores).duration


def min_op_time(node: Node, hw: HardwareSpec) -> float:
    """Lower bound of `op_time` over every thread configuration."""
    cores = hw.physical_cores
    work = max(node.parallel_prep, node.flops / hw.fma_rate)
    return node.serial_prep + work / cores + hw.dispatch_overhead


def critical_path_bound(graph: Graph, hw: HardwareSpec) -> float:
    """Longest dependency path with every operator at its minimum time."""
    preds = predecessors(graph)
    nodes = graph.node_map()
    finish: dict[str, float] = {}
    for node_id in topological_order(graph):
        start = max((finish[pred] for pred in preds[node_id]), default=0.0)
        finish[node_id] = start + min_op_time(nodes[node_id], hw)
    return max(finish.values(), default=0.0)
