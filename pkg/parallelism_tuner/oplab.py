"""
MatMul operator lab.

Two operator designs wrap the same blocked kernel:

- design 1 runs a single-threaded data-preparation pass over both operands
  and then hands the packed matrices to the kernel's own thread pool;
- design 2 splits the rows of x into one block per intra-op thread and runs
  design 1 on every block from the intra-op pool, so preparation of one
  block overlaps the kernel work of the others.

The kernel multiplies row tiles in float64 with BLAS pinned to one thread,
so the kernel pool size alone sets the compute parallelism.
"""

import logging
import statistics
import time
from collections.abc import Callable, Sequence
from typing import Optional

import numpy as np
from scipy.optimize import curve_fit
from threadpoolctl import threadpool_limits

from .config import Config
from .exceptions import DimensionMismatchError, FitError, InputError
from .models import ScalingRow
from .threadpool import Pool

logger = logging.getLogger(__name__)

MIN_BENCH_SIZE = 64
"""Smallest square size the scaling benchmark accepts."""


def check_matrix(matrix, name: str = "matrix") -> np.ndarray:
    """
    Coerce a matrix to a dense row-major float32 array.

    Raises:
        InputError: Not two-dimensional, or non-finite values
    """
    array = np.ascontiguousarray(matrix, dtype=np.float32)
    if array.ndim != 2:
        raise InputError(f"{name} must be two-dimensional, got shape {array.shape}")
    if not np.isfinite(array).all():
        raise InputError(f"{name} contains non-finite values")
    return array


def _check_operands(x, w) -> tuple[np.ndarray, np.ndarray]:
    x = check_matrix(x, "x")
    w = check_matrix(w, "w")
    if x.shape[1] != w.shape[0]:
        raise DimensionMismatchError(
            f"Cannot multiply {x.shape[0]}x{x.shape[1]} by {w.shape[0]}x{w.shape[1]}",
            {"x_shape": x.shape, "w_shape": w.shape},
        )
    return x, w


def reference_matmul(x, w) -> np.ndarray:
    """Naive loop-nest product in float64, the correctness oracle."""
    x, w = _check_operands(x, w)
    return np.einsum("ik,kj->ij", x.astype(np.float64), w.astype(np.float64), optimize=False)


def _pack(matrix: np.ndarray, passes: int) -> np.ndarray:
    packed = np.empty_like(matrix)
    for _ in range(passes):
        for i, row in enumerate(matrix):
            if not np.isfinite(row).all():
                raise InputError(f"Non-finite value in row {i}")
            packed[i] = row
    return packed


def prepare_operands(x, w, passes: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
    """
    Single-threaded data preparation: row-by-row packing and validation.

    Cost grows linearly with each dimension; `passes` repeats it to make the
    serial fraction of the operator tunable.
    """
    passes = max(1, passes if passes is not None else Config.PREP_PASSES)
    return _pack(x, passes), _pack(w, passes)


def _tile(x: np.ndarray, w64: np.ndarray, out: np.ndarray, start: int, stop: int) -> None:
    out[start:stop] = x[start:stop].astype(np.float64) @ w64


def blocked_kernel(
    x: np.ndarray,
    w: np.ndarray,
    kernel_pool: Optional[Pool] = None,
    block: Optional[int] = None,
) -> np.ndarray:
    """Multiply row tiles of x by w, in parallel on `kernel_pool` if given."""
    block = max(1, block if block is not None else Config.KERNEL_BLOCK)
    w64 = w.astype(np.float64)
    out = np.empty((x.shape[0], w.shape[1]), dtype=np.float32)
    tiles = [(start, min(start + block, x.shape[0])) for start in range(0, x.shape[0], block)]
    if kernel_pool is None:
        for start, stop in tiles:
            _tile(x, w64, out, start, stop)
    else:
        futures = [kernel_pool.submit(_tile, x, w64, out, start, stop) for start, stop in tiles]
        for future in futures:
            future.result()
    return out


def _design1(x: np.ndarray, w: np.ndarray, kernel_pool: Optional[Pool], passes: Optional[int]) -> np.ndarray:
    xp, wp = prepare_operands(x, w, passes)
    return blocked_kernel(xp, wp, kernel_pool)


def matmul_design1(
    x,
    w,
    kernel_pool: Optional[Pool] = None,
    prep_passes: Optional[int] = None,
) -> np.ndarray:
    """
    Prepare on the calling thread, then multiply on the kernel pool.

    Args:
        x: Left operand (m x k)
        w: Right operand (k x n)
        kernel_pool: Kernel threads; None multiplies on the calling thread
        prep_passes: Preparation passes (default: Config.PREP_PASSES)

    Raises:
        DimensionMismatchError: x.cols != w.rows
    """
    x, w = _check_operands(x, w)
    with threadpool_limits(limits=1, user_api="blas"):
        return _design1(x, w, kernel_pool, prep_passes)


def matmul_design2(
    x,
    w,
    intra_pool: Pool,
    kernel_pool: Optional[Pool] = None,
    prep_passes: Optional[int] = None,
) -> np.ndarray:
    """
    Split x by rows over the intra-op pool; every block runs design 1.

    With a one-thread intra-op pool the result is identical to design 1.

    Raises:
        DimensionMismatchError: x.cols != w.rows
        PoolShutdownError: intra_pool has been shut down
    """
    x, w = _check_operands(x, w)
    blocks = [block for block in np.array_split(x, intra_pool.size, axis=0) if block.shape[0]]
    with threadpool_limits(limits=1, user_api="blas"):
        futures = [
            intra_pool.submit(_design1, np.ascontiguousarray(block), w, kernel_pool, prep_passes)
            for block in blocks
        ]
        parts = [future.result() for future in futures]
    if not parts:
        return np.empty((0, w.shape[1]), dtype=np.float32)
    return np.concatenate(parts, axis=0)


def _median_latency(run: Callable[[], object], trials: int) -> float:
    run()  # warm-up
    latencies = []
    for _ in range(trials):
        start = time.perf_counter()
        run()
        latencies.append(time.perf_counter() - start)
    return statistics.median(latencies)


def _operands(size: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, size=(size, size)).astype(np.float32)
    w = rng.uniform(-1.0, 1.0, size=(size, size)).astype(np.float32)
    return x, w


def scaling_bench(
    sizes: Sequence[int],
    threads: int,
    trials: Optional[int] = None,
    seed: int = 0,
) -> list[ScalingRow]:
    """
    Design 1 speedup of `threads` kernel threads over one, per square size.

    Returns:
        Rows for 1 thread (speedup 1.0) and, when threads > 1, for `threads`

    Raises:
        InputError: threads < 1, or a size below MIN_BENCH_SIZE
    """
    if threads < 1:
        raise InputError(f"threads must be at least 1, got {threads}")
    too_small = [size for size in sizes if size < MIN_BENCH_SIZE]
    if too_small:
        raise InputError(
            f"Benchmark sizes must be at least {MIN_BENCH_SIZE}, got {too_small}"
        )
    trials = max(1, trials if trials is not None else Config.BENCH_TRIALS)
    rows: list[ScalingRow] = []
    for size in sizes:
        x, w = _operands(size, seed)
        baseline = _median_latency(lambda: matmul_design1(x, w), trials)
        rows.append(ScalingRow(size=size, threads=1, design="design1",
                               latency_us=baseline * 1e6, speedup=1.0))
        if threads > 1:
            with Pool(threads, name="kernel") as kernel_pool:
                latency = _median_latency(lambda: matmul_design1(x, w, kernel_pool), trials)
            rows.append(ScalingRow(size=size, threads=threads, design="design1",
                                   latency_us=latency * 1e6, speedup=baseline / latency))
        logger.info("Scaling bench size %d: %s", size, rows[-1].speedup)
    return rows


def design_bench(
    size: int,
    threads: int,
    trials: Optional[int] = None,
    seed: int = 0,
) -> list[ScalingRow]:
    """
    Design 1 against design 2 at one size with `threads` threads per pool.

    The speedup column is relative to design 1, so design 2's value is its
    throughput ratio.
    """
    trials = max(1, trials if trials is not None else Config.BENCH_TRIALS)
    x, w = _operands(size, seed)
    with Pool(threads, name="kernel") as kernel_pool, Pool(threads, name="intra") as intra_pool:
        first = _median_latency(lambda: matmul_design1(x, w, kernel_pool), trials)
        second = _median_latency(lambda: matmul_design2(x, w, intra_pool, kernel_pool), trials)
    logger.info("Design bench size %d, %d threads: %.3g / %.3g s", size, threads, first, second)
    return [
        ScalingRow(size=size, threads=threads, design="design1", latency_us=first * 1e6, speedup=1.0),
        ScalingRow(size=size, threads=threads, design="design2", latency_us=second * 1e6,
                   speedup=first / second),
    ]


def amdahl_speedup(serial_fraction: float, threads: float) -> float:
    """Speedup predicted by Amdahl's law."""
    return 1.0 / (serial_fraction + (1.0 - serial_fraction) / threads)


def fit_amdahl(speedup: float, threads: int) -> float:
    """
    Serial fraction s solving speedup = 1 / (s + (1 - s) / threads).

    Raises:
        FitError: threads < 2 or speedup outside [1, threads]
    """
    if threads < 2:
        raise FitError(f"Need at least 2 threads to fit a serial fraction, got {threads}")
    if not 1.0 <= speedup <= threads:
        raise FitError(
            f"Speedup {speedup} outside [1, {threads}]",
            {"speedup": speedup, "threads": threads},
        )
    return (threads / speedup - 1.0) / (threads - 1.0)


def fit_amdahl_curve(threads: Sequence[float], speedups: Sequence[float]) -> float:
    """Least-squares serial fraction over several (threads, speedup) points."""
    if len(threads) != len(speedups) or not threads:
        raise FitError("Need matching, non-empty thread and speedup sequences")
    (serial_fraction,), _ = curve_fit(
        amdahl_speedup,
        np.asarray(threads, dtype=np.float64),
        np.asarray(speedups, dtype=np.float64),
        p0=[0.1],
        bounds=(0.0, 1.0),
    )
    return float(serial_fraction)
