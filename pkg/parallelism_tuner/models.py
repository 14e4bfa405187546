"""Data models for graphs, hardware, thread configurations and results."""

from enum import Enum
from typing import Any, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveInt,
    field_validator,
)


class OperatorKind(str, Enum):
    """Operator kind tag carried by every node."""

    CONV = "Conv"
    MATMUL = "MatMul"
    EMBEDDING = "Embedding"
    ELEMENTWISE_MATH = "ElementwiseMath"
    RESHAPE = "Reshape"
    CONCAT = "Concat"
    SPLIT = "Split"
    CONTROL = "Control"
    OTHER = "Other"


class Node(BaseModel):
    """One operator of a computational graph with its cost parameters."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str = Field(..., min_length=1)
    kind: OperatorKind
    serial_prep: float = Field(0.0, ge=0, allow_inf_nan=False)  # single-threaded framework work
    parallel_prep: float = Field(0.0, ge=0, allow_inf_nan=False)  # divisible across intra-op threads
    flops: float = Field(0.0, ge=0, allow_inf_nan=False)  # FMA-bound kernel work
    bytes: float = Field(0.0, ge=0, allow_inf_nan=False)  # moved when crossing sockets


class Graph(BaseModel):
    """Operator DAG.

    Nodes and edges are sets; they are stored sorted (nodes by id) so equal
    graphs compare and serialize identically. Structural invariants are
    checked by `graph.validate`, not here.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    nodes: tuple[Node, ...] = ()
    edges: tuple[tuple[str, str], ...] = ()

    @field_validator("nodes")
    @classmethod
    def _sort_nodes(cls, nodes: tuple[Node, ...]) -> tuple[Node, ...]:
        return tuple(sorted(nodes, key=lambda node: node.id))

    @field_validator("edges")
    @classmethod
    def _sort_edges(
        cls, edges: tuple[tuple[str, str], ...]
    ) -> tuple[tuple[str, str], ...]:
        return tuple(sorted(edges))

    def node_map(self) -> dict[str, Node]:
        """Nodes keyed by id."""
        return {node.id: node for node in self.nodes}


class HardwareSpec(BaseModel):
    """Description of the CPU platform a graph runs on."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    sockets: PositiveInt
    cores_per_socket: PositiveInt
    smt_ways: PositiveInt
    fma_rate: float = Field(..., gt=0, allow_inf_nan=False)
    upi_bandwidth: float = Field(..., gt=0, allow_inf_nan=False)
    dispatch_overhead: float = Field(0.0, ge=0, allow_inf_nan=False)

    @property
    def physical_cores(self) -> int:
        return self.sockets * self.cores_per_socket

    @property
    def logical_cores(self) -> int:
        return self.sockets * self.cores_per_socket * self.smt_ways

    @property
    def thread_slots(self) -> int:
        """Software threads the machine hosts without over-threading.

        Every physical core hosts one kernel thread plus one intra-op thread,
        as SMT siblings or time-shared on single-threaded cores.
        """
        return self.physical_cores * max(2, self.smt_ways)


class ThreadConfig(BaseModel):
    """Inter-op pools and the per-pool intra-op / kernel thread counts."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    pools: PositiveInt
    intra_threads: PositiveInt
    kernel_threads: PositiveInt

    @property
    def software_threads(self) -> int:
        return self.pools * (self.intra_threads + self.kernel_threads)

    def label(self) -> str:
        return f"({self.pools}, {self.intra_threads}, {self.kernel_threads})"


class WidthReport(BaseModel):
    """Graph-width metrics computed over heavy operators."""

    model_config = ConfigDict(frozen=True)

    heavy_count: NonNegativeInt
    heavy_depth: NonNegativeInt
    max_width: NonNegativeInt
    avg_width: NonNegativeInt


class RecommendationBasis(str, Enum):
    GUIDELINE = "guideline"
    PRESET_TENSORFLOW = "preset_tensorflow"
    PRESET_INTEL = "preset_intel"
    PRESET_DEFAULT = "preset_default"


class Recommendation(BaseModel):
    """A thread configuration together with where it came from."""

    model_config = ConfigDict(frozen=True)

    config: ThreadConfig
    basis: RecommendationBasis
    rationale: str


class ScheduleMode(str, Enum):
    SYNCHRONOUS = "synchronous"
    ASYNCHRONOUS = "asynchronous"


class Placement(str, Enum):
    SINGLE_SOCKET = "single_socket"
    DATA_PARALLEL = "data_parallel"
    MODEL_PARALLEL = "model_parallel"


class SchedulePolicy(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: ScheduleMode = ScheduleMode.ASYNCHRONOUS
    placement: Placement = Placement.SINGLE_SOCKET


class TraceEvent(BaseModel):
    """Execution interval of one operator on one pool."""

    model_config = ConfigDict(frozen=True)

    node_id: str
    pool_id: NonNegativeInt
    socket_id: NonNegativeInt
    start: float
    end: float


class CoreBreakdown(BaseModel):
    """Time one physical core spent executing, synchronizing and idling."""

    model_config = ConfigDict(frozen=True)

    core_id: NonNegativeInt
    busy: float
    sync: float
    idle: float


class SimResult(BaseModel):
    """Outcome of one simulated graph execution."""

    model_config = ConfigDict(frozen=True)

    makespan: float
    per_core: tuple[CoreBreakdown, ...]
    trace: tuple[TraceEvent, ...]
    config: ThreadConfig
    oversubscribed: bool = False

    def socket_busy(self, hw: HardwareSpec) -> list[float]:
        """Busy time summed per socket."""
        totals = [0.0] * hw.sockets
        for core in self.per_core:
            totals[core.core_id // hw.cores_per_socket] += core.busy
        return totals

    def summary(self) -> dict[str, Any]:
        busy = sum(core.busy for core in self.per_core)
        sync = sum(core.sync for core in self.per_core)
        idle = sum(core.idle for core in self.per_core)
        return {
            "config": self.config.model_dump(),
            "makespan": self.makespan,
            "operators": len(self.trace),
            "oversubscribed": self.oversubscribed,
            "core_time": {"busy": busy, "sync": sync, "idle": idle},
        }


class SweepEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    config: ThreadConfig
    makespan: float


class SweepResult(BaseModel):
    """All simulated configurations, fastest first."""

    model_config = ConfigDict(frozen=True)

    entries: tuple[SweepEntry, ...]

    @property
    def argmin(self) -> SweepEntry:
        return self.entries[0]

    def makespan_of(self, config: ThreadConfig) -> Optional[float]:
        for entry in self.entries:
            if entry.config == config:
                return entry.makespan
        return None


class ComparisonRow(BaseModel):
    """One row of a guideline / preset / optimum comparison."""

    model_config = ConfigDict(frozen=True)

    label: str
    config: ThreadConfig
    makespan: float
    ratio_to_argmin: float
    oversubscribed: bool = False


class BenchResult(BaseModel):
    """Thread-pool microbenchmark measurement."""

    model_config = ConfigDict(frozen=True)

    pool_size: PositiveInt
    tasks: NonNegativeInt
    total_latency: float  # seconds
    final_counter: NonNegativeInt

    @property
    def total_latency_us(self) -> float:
        return self.total_latency * 1e6

    def as_payload(self) -> dict[str, Any]:
        return {
            "pool_size": self.pool_size,
            "tasks": self.tasks,
            "total_latency_us": round(self.total_latency_us, 3),
            "final_counter": self.final_counter,
        }


class ScalingRow(BaseModel):
    """One MatMul benchmark measurement."""

    model_config = ConfigDict(frozen=True)

    size: PositiveInt
    threads: PositiveInt
    design: str
    latency_us: float
    speedup: float


class Report(BaseModel):
    """Self-describing CLI report."""

    model_config = ConfigDict(frozen=True)

    command: str
    inputs: dict[str, str]
    results: dict[str, Any]
    tool_version: str
    measured: bool = False
