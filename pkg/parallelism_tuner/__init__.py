"""
Parallelism Tuner - inter-op / intra-op / kernel thread tuning for operator graphs.

Computes graph-width metrics, recommends thread configurations, validates
them with a discrete-event scheduling simulator and an exhaustive sweep, and
ships a real thread pool and MatMul operator lab for desk-scale measurements.
"""

__version__ = "0.1.0"

from .bundled import bundled_graph, bundled_hardware, chain_graph, load_graph, load_hardware
from .config import Config
from .exceptions import (
    DimensionMismatchError,
    FitError,
    GraphSyntaxError,
    GraphValidationError,
    InputError,
    OversubscriptionError,
    PoolShutdownError,
    TunerError,
)
from .graph import (
    parse_graph,
    parse_hardware,
    serialize_graph,
    serialize_hardware,
    topological_order,
    validate,
)
from .models import (
    BenchResult,
    Graph,
    HardwareSpec,
    Node,
    OperatorKind,
    Placement,
    Recommendation,
    ScheduleMode,
    SchedulePolicy,
    SimResult,
    ThreadConfig,
    TraceEvent,
    WidthReport,
)
from .sim import (
    compare_presets,
    critical_path_bound,
    op_time,
    simulate,
    simulate_multisocket,
    sweep,
)
from .threadpool import Pool, SpawningPool, microbench
from .tuner import all_presets, is_oversubscribed, preset, recommend
from .width import avg_width, classify_heavy, heavy_depth, max_width, width_report

__all__ = [
    # Configuration
    "Config",
    # Models
    "BenchResult",
    "Graph",
    "HardwareSpec",
    "Node",
    "OperatorKind",
    "Placement",
    "Recommendation",
    "ScheduleMode",
    "SchedulePolicy",
    "SimResult",
    "ThreadConfig",
    "TraceEvent",
    "WidthReport",
    # Graph core
    "bundled_graph",
    "bundled_hardware",
    "chain_graph",
    "load_graph",
    "load_hardware",
    "parse_graph",
    "parse_hardware",
    "serialize_graph",
    "serialize_hardware",
    "topological_order",
    "validate",
    # Width analysis and tuning
    "avg_width",
    "classify_heavy",
    "heavy_depth",
    "max_width",
    "width_report",
    "all_presets",
    "is_oversubscribed",
    "preset",
    "recommend",
    # Simulation
    "compare_presets",
    "critical_path_bound",
    "op_time",
    "simulate",
    "simulate_multisocket",
    "sweep",
    # Thread pool
    "Pool",
    "SpawningPool",
    "microbench",
    # Exceptions
    "DimensionMismatchError",
    "FitError",
    "GraphSyntaxError",
    "GraphValidationError",
    "InputError",
    "OversubscriptionError",
    "PoolShutdownError",
    "TunerError",
]
