"""Two-socket data- and model-parallel execution."""

import logging
from collections.abc import Callable
from typing import Optional, Union

from ..models import (
    Graph,
    HardwareSpec,
    Node,
    OperatorKind,
    Placement,
    SchedulePolicy,
    SimResult,
    ThreadConfig,
)
from ..utils import FP32_BYTES
from .engine import simulate

logger = logging.getLogger(__name__)

# Framework-side MatMul costs: per-row serial work and per-element packing
MATMUL_PREP_PER_ROW = 1000.0
MATMUL_PACK_PER_ELEMENT = 1.0


def simulate_multisocket(
    graph: Graph,
    config: ThreadConfig,
    hw: HardwareSpec,
    placement: Union[Placement, str] = Placement.DATA_PARALLEL,
) -> SimResult:
    """
    Simulate a graph across all sockets of a machine.

    data_parallel splits every operator over all sockets and serializes its
    remote traffic (bytes / upi_bandwidth) into the operator. model_parallel
    pins pool i to socket i mod sockets; a consumer of a remote producer
    starts only after the producer's bytes crossed the interconnect.

    On a one-socket machine both placements are plain `simulate`.
    """
    placement = Placement(placement)
    if placement == Placement.SINGLE_SOCKET:
        raise ValueError("simulate_multisocket needs data_parallel or model_parallel")
    if hw.sockets == 1:
        return simulate(graph, config, hw)
    logger.debug("Multi-socket %s run of %s on %d sockets", placement.value, graph.name, hw.sockets)
    return simulate(graph, config, hw, SchedulePolicy(placement=placement))


def matmul_node(
    size: int,
    traffic: Optional[Callable[[int], float]] = None,
    node_id: str = "matmul",
    prep_per_row: float = MATMUL_PREP_PER_ROW,
    pack_per_element: float = MATMUL_PACK_PER_ELEMENT,
) -> Node:
    """
    A square MatMul operator of dimension `size`.

    Serial prep grows with n, packing with n^2 and flops with n^3.

    Args:
        size: Matrix dimension n
        traffic: Remote bytes moved for a given n (default one fp32 n x n matrix)
        node_id: Node id
        prep_per_row: Serial framework work per row
        pack_per_element: Parallel packing work per element
    """
    remote = traffic(size) if traffic else FP32_BYTES * size * size
    return Node(
        id=node_id,
        kind=OperatorKind.MATMUL,
        serial_prep=prep_per_row * size,
        parallel_prep=pack_per_element * size * size,
        flops=2.0 * size ** 3,
        bytes=remote,
    )


def socket_speedup(node: Node, hw: HardwareSpec) -> float:
    """
    Data-parallel speedup of `node` on all sockets over one socket.

    The one-socket run uses the cores of a single socket; the multi-socket
    run uses all physical cores.
    """
    graph = Graph(name=node.id, nodes=(node,))
    one_socket = hw.model_copy(update={"sockets": 1})
    per_socket = hw.cores_per_socket
    single = simulate(
        graph,
        ThreadConfig(pools=1, intra_threads=per_socket, kernel_threads=per_socket),
        one_socket,
    )
    total = hw.physical_cores
    multi = simulate_multisocket(
        graph,
        ThreadConfig(pools=1, intra_threads=total, kernel_threads=total),
        hw,
        Placement.DATA_PARALLEL,
    )
    if multi.makespan == 0:
        return 1.0
    return single.makespan / multi.makespan
