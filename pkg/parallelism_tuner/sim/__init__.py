"""Scheduling simulator: cost model, event engine, multi-socket runs and sweeps."""

from .cost import OpCost, critical_path_bound, min_op_time, op_cost, op_time
from .engine import PoolLayout, Simulator, layout_pools, pool_width, simulate
from .export import core_csv, trace_csv, write_core_csv, write_trace_csv
from .multisocket import matmul_node, simulate_multisocket, socket_speedup
from .sweep import compare_presets, sweep

__all__ = [
    "OpCost",
    "PoolLayout",
    "Simulator",
    "compare_presets",
    "core_csv",
    "critical_path_bound",
    "layout_pools",
    "matmul_node",
    "min_op_time",
    "op_cost",
    "op_time",
    "pool_width",
    "simulate",
    "simulate_multisocket",
    "socket_speedup",
    "sweep",
    "trace_csv",
    "write_core_csv",
    "write_trace_csv",
]
