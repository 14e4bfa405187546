"""Shared fixtures and the `bench` marker for wall-clock benchmarks."""

import os

# Keep BLAS single-threaded before numpy is imported anywhere in the session
os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("MKL_NUM_THREADS", "1")
os.environ.setdefault("OMP_NUM_THREADS", "1")

import pytest  # noqa: E402

from parallelism_tuner import bundled_graph, bundled_hardware  # noqa: E402
from parallelism_tuner.models import HardwareSpec  # noqa: E402

RUN_BENCH = os.getenv("PARTUNE_RUN_BENCH", "").lower() in ("true", "1", "yes")


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "bench: wall-clock benchmark gate (set PARTUNE_RUN_BENCH=1 to run)"
    )


def pytest_collection_modifyitems(config, items):
    if RUN_BENCH:
        return
    skip = pytest.mark.skip(reason="benchmark; set PARTUNE_RUN_BENCH=1 to run")
    for item in items:
        if "bench" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def four_core() -> HardwareSpec:
    return bundled_hardware("four-core")


@pytest.fixture
def one_socket() -> HardwareSpec:
    return bundled_hardware("one-socket-24")


@pytest.fixture
def two_socket() -> HardwareSpec:
    return bundled_hardware("two-socket-24")


@pytest.fixture
def single_core() -> HardwareSpec:
    """One core, one hardware thread, 100 flops per time-unit, no dispatch cost."""
    return HardwareSpec(
        sockets=1,
        cores_per_socket=1,
        smt_ways=1,
        fma_rate=100.0,
        upi_bandwidth=1.0,
        dispatch_overhead=0.0,
    )


@pytest.fixture
def fig2_toy():
    return bundled_graph("fig2-toy")


@pytest.fixture
def inception():
    return bundled_graph("inception-module4")
