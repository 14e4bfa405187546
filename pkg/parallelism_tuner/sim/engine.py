"""
Discrete-event simulator of operator scheduling.

Pools own disjoint sets of physical cores. A node becomes ready when all of
its predecessors complete; ready nodes are dispatched first-come first-served
(ties by node id) to idle pools, lowest pool index first. A dispatched node
occupies its pool for the node's whole duration. While it runs, the pool's
cores are either busy executing or stalled on the operator's barriers (sync);
cores without a running operator are idle.
"""

import heapq
import logging
from dataclasses import dataclass
from typing import Literal, Optional

from ..config import Config
from ..exceptions import OversubscriptionError
from ..graph import predecessors, successors
from ..models import (
    CoreBreakdown,
    Graph,
    HardwareSpec,
    Node,
    Placement,
    ScheduleMode,
    SchedulePolicy,
    SimResult,
    ThreadConfig,
    TraceEvent,
)
from ..tuner import is_oversubscribed
from .cost import OpCost, op_cost

logger = logging.getLogger(__name__)

OversubscriptionMode = Literal["reject", "penalize"]


@dataclass(frozen=True)
class PoolLayout:
    """Physical cores owned by one inter-op pool."""

    pool_id: int
    cores: tuple[int, ...]
    socket_id: int
    spans_sockets: bool


def pool_width(config: ThreadConfig, hw: HardwareSpec) -> int:
    """Physical cores each pool owns before socket constraints apply."""
    wanted = max(config.intra_threads, config.kernel_threads)
    return max(1, min(wanted, hw.physical_cores // config.pools))


def layout_pools(
    config: ThreadConfig,
    hw: HardwareSpec,
    placement: Placement = Placement.SINGLE_SOCKET,
) -> list[PoolLayout]:
    """
    Assign physical cores to every pool of a configuration.

    single_socket fills cores in order. data_parallel stripes each pool's
    cores round-robin over the sockets so every operator is split across
    them. model_parallel pins pool i to socket i mod sockets.

    The configuration must not have more pools than physical cores. A
    data_parallel layout with more pools than cores per socket cannot stripe
    and falls back to filling cores in order.
    """
    cps = hw.cores_per_socket
    width = pool_width(config, hw)
    layouts: list[PoolLayout] = []

    if placement == Placement.DATA_PARALLEL and config.pools <= cps:
        per_socket = min(-(-width // hw.sockets), cps // config.pools)
        width = min(width, per_socket * hw.sockets)
        for pool in range(config.pools):
            cores = tuple(
                (rank % hw.sockets) * cps + pool * per_socket + rank // hw.sockets
                for rank in range(width)
            )
            layouts.append(_layout(pool, cores, cps))
    elif placement == Placement.MODEL_PARALLEL:
        per_socket_pools = -(-config.pools // hw.sockets)
        width = min(width, cps // per_socket_pools)
        for pool in range(config.pools):
            socket, slot = pool % hw.sockets, pool // hw.sockets
            base = socket * cps + slot * width
            layouts.append(_layout(pool, tuple(range(base, base + width)), cps))
    else:
        for pool in range(config.pools):
            layouts.append(
                _layout(pool, tuple(range(pool * width, (pool + 1) * width)), cps)
            )
    return layouts


def _layout(pool: int, cores: tuple[int, ...], cores_per_socket: int) -> PoolLayout:
    sockets = {core // cores_per_socket for core in cores}
    return PoolLayout(
        pool_id=pool,
        cores=cores,
        socket_id=cores[0] // cores_per_socket,
        spans_sockets=len(sockets) > 1,
    )


class Simulator:
    """
    Event-driven execution of one graph under one thread configuration.

    Example:
        ```python
        result = Simulator(graph, ThreadConfig(pools=2, intra_threads=2,
                                               kernel_threads=2), hw).run()
        print(result.makespan)
        ```
    """

    def __init__(
        self,
        graph: Graph,
        config: ThreadConfig,
        hw: HardwareSpec,
        policy: Optional[SchedulePolicy] = None,
        oversubscription: OversubscriptionMode = "reject",
    ):
        """
        Initialize the simulator.

        Args:
            graph: Validated graph
            config: Thread configuration
            hw: Hardware spec
            policy: Scheduling mode and socket placement
            oversubscription: "reject" raises on over-threading; "penalize"
                clamps the pools to the machine and slows every operator

        Raises:
            OversubscriptionError: Over-threaded configuration in reject mode
        """
        self.graph = graph
        self.hw = hw
        self.policy = policy or SchedulePolicy()
        self.config = config

        effective = config
        if self.policy.mode == ScheduleMode.SYNCHRONOUS:
            effective = config.model_copy(update={"pools": 1})

        self.oversubscribed = is_oversubscribed(effective, hw)
        self.slowdown = 1.0
        if self.oversubscribed:
            if oversubscription == "reject":
                raise OversubscriptionError(effective.software_threads, hw.thread_slots)
            excess = max(
                effective.software_threads / hw.thread_slots,
                effective.pools / hw.physical_cores,
            )
            self.slowdown = 1.0 + Config.OVERSUBSCRIPTION_PENALTY * (excess - 1.0)
            effective = effective.model_copy(
                update={"pools": min(effective.pools, hw.physical_cores)}
            )
            logger.debug(
                "Over-threaded config %s penalized by %.3fx",
                config.label(), self.slowdown,
            )

        self.effective = effective
        self.layouts = layout_pools(effective, hw, self.policy.placement)
        self._nodes = graph.node_map()
        self._costs: dict[tuple[str, int, bool], OpCost] = {}

    def _cost(self, node: Node, layout: PoolLayout) -> OpCost:
        key = (node.id, len(layout.cores), layout.spans_sockets)
        if key not in self._costs:
            transfer = 0.0
            if self.policy.placement == Placement.DATA_PARALLEL and layout.spans_sockets:
                transfer = node.bytes / self.hw.upi_bandwidth
            cost = op_cost(
                node,
                self.effective.intra_threads,
                self.effective.kernel_threads,
                self.hw,
                cores=len(layout.cores),
                transfer=transfer,
            )
            self._costs[key] = cost.scaled(self.slowdown) if self.slowdown != 1.0 else cost
        return self._costs[key]

    def run(self) -> SimResult:
        """Simulate the graph to completion."""
        preds = predecessors(self.graph)
        succs = successors(self.graph)
        waiting = {node_id: len(ids) for node_id, ids in preds.items()}
        model_parallel = self.policy.placement == Placement.MODEL_PARALLEL

        ready: list[tuple[float, str]] = [
            (0.0, node_id) for node_id in sorted(waiting) if waiting[node_id] == 0
        ]
        heapq.heapify(ready)
        idle = [layout.pool_id for layout in self.layouts]
        heapq.heapify(idle)
        running: list[tuple[float, int, str]] = []

        busy = [0.0] * self.hw.physical_cores
        sync = [0.0] * self.hw.physical_cores
        finished: dict[str, float] = {}
        placed_socket: dict[str, int] = {}
        trace: list[TraceEvent] = []
        now = 0.0

        while True:
            while ready and idle:
                _, node_id = heapq.heappop(ready)
                layout = self.layouts[heapq.heappop(idle)]
                node = self._nodes[node_id]

                start = now
                if model_parallel:
                    for pred in preds[node_id]:
                        if placed_socket[pred] != layout.socket_id:
                            arrival = finished[pred] + self._nodes[pred].bytes / self.hw.upi_bandwidth
                            start = max(start, arrival)

                cost = self._cost(node, layout)
                end = start + cost.duration
                for rank, core in enumerate(layout.cores):
                    executing = cost.busy(rank)
                    busy[core] += executing
                    sync[core] += (end - now) - executing

                placed_socket[node_id] = layout.socket_id
                trace.append(
                    TraceEvent(
                        node_id=node_id,
                        pool_id=layout.pool_id,
                        socket_id=layout.socket_id,
                        start=start,
                        end=end,
                    )
                )
                heapq.heappush(running, (end, layout.pool_id, node_id))
                logger.debug(
                    "t=%.6g dispatch %s -> pool %d [%.6g, %.6g]",
                    now, node_id, layout.pool_id, start, end,
                )

            if not running:
                break

            now = running[0][0]
            while running and running[0][0] == now:
                _, pool_id, node_id = heapq.heappop(running)
                finished[node_id] = now
                heapq.heappush(idle, pool_id)
                for succ in succs[node_id]:
                    waiting[succ] -= 1
                    if waiting[succ] == 0:
                        heapq.heappush(ready, (now, succ))

        makespan = max(finished.values(), default=0.0)
        per_core = tuple(
            CoreBreakdown(
                core_id=core,
                busy=busy[core],
                sync=sync[core],
                idle=makespan - busy[core] - sync[core],
            )
            for core in range(self.hw.physical_cores)
        )
        trace.sort(key=lambda event: (event.start, event.pool_id, event.node_id))

        logger.debug(
            "Simulated %s with %s: makespan %.6g",
            self.graph.name, self.config.label(), makespan,
        )
        return SimResult(
            makespan=makespan,
            per_core=per_core,
            trace=tuple(trace),
            config=self.config,
            oversubscribed=self.oversubscribed,
        )


def simulate(
    graph: Graph,
    config: ThreadConfig,
    hw: HardwareSpec,
    policy: Optional[SchedulePolicy] = None,
    oversubscription: OversubscriptionMode = "reject",
) -> SimResult:
    """Simulate one execution of `graph`; see `Simulator`."""
    return Simulator(graph, config, hw, policy, oversubscription).run()
