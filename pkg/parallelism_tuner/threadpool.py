"""
Fixed-size task thread pool and the shared-counter contention microbenchmark.

`Pool` parks its workers on one shared blocking queue, so running far more
workers than cores costs little. `SpawningPool` is the naive contrast: it
starts fresh threads for every batch and funnels them through one lock.
"""

import logging
import os
import queue
import statistics
import threading
import time
from collections.abc import Callable, Hashable, Iterable
from concurrent.futures import Future
from pathlib import Path
from typing import Any, Optional

import psutil

from .config import Config
from .exceptions import PoolShutdownError, TunerError
from .models import BenchResult

logger = logging.getLogger(__name__)

_Task = tuple[Future, Callable[..., Any], tuple, dict]


def detect_physical_cores() -> int:
    """Physical core count, honoring `Config.PHYSICAL_CORES`."""
    if Config.PHYSICAL_CORES:
        return Config.PHYSICAL_CORES
    cores = psutil.cpu_count(logical=False)
    if cores:
        return cores
    return max(1, (os.cpu_count() or 2) // 2)


def _sysfs_core(cpu: int) -> Optional[tuple[int, int]]:
    topology = Path(f"/sys/devices/system/cpu/cpu{cpu}/topology")
    try:
        return (
            int((topology / "physical_package_id").read_text()),
            int((topology / "core_id").read_text()),
        )
    except (OSError, ValueError):
        return None


def physical_first(
    cpus: Iterable[int],
    core_of: Callable[[int], Optional[Hashable]] = _sysfs_core,
) -> list[int]:
    """
    Order logical CPUs so one CPU of every physical core comes before any
    SMT sibling.

    CPUs whose core is unknown count as cores of their own.
    """
    taken: dict[Hashable, int] = {}
    ranked: list[tuple[int, int]] = []
    for cpu in sorted(cpus):
        core = core_of(cpu)
        key = core if core is not None else ("cpu", cpu)
        rank = taken.get(key, 0)
        taken[key] = rank + 1
        ranked.append((rank, cpu))
    return [cpu for _, cpu in sorted(ranked)]


def _allowed_cpus() -> list[int]:
    cpus: Iterable[int]
    try:
        cpus = psutil.Process().cpu_affinity()
    except (AttributeError, psutil.Error):
        cpus = range(os.cpu_count() or 1)
    return physical_first(cpus)


def _run(future: Future, fn: Callable[..., Any], args: tuple, kwargs: dict) -> None:
    if not future.set_running_or_notify_cancel():
        return
    try:
        result = fn(*args, **kwargs)
    except BaseException as e:
        future.set_exception(e)
    else:
        future.set_result(result)


class Pool:
    """
    Fixed-size pool of worker threads fed by one multi-producer queue.

    Every submitted task runs exactly once. `join` blocks until every task
    submitted so far has completed.

    Example:
        ```python
        with Pool(4) as pool:
            futures = [pool.submit(work, i) for i in range(100)]
            pool.join()
        ```
    """

    def __init__(self, size: int, name: str = "pool", pin_threads: Optional[bool] = None):
        """
        Start `size` idle workers.

        Args:
            size: Worker threads (>= 1)
            name: Thread name prefix
            pin_threads: Pin workers round-robin to the allowed CPUs, physical
                cores before SMT siblings
                (default: Config.PIN_THREADS)

        Raises:
            ValueError: size < 1
            TunerError: Worker threads could not be started
        """
        if size < 1:
            raise ValueError(f"Pool size must be at least 1, got {size}")
        self.size = size
        self.name = name
        self._queue: "queue.Queue[Optional[_Task]]" = queue.Queue()
        self._lock = threading.Lock()
        self._shutdown = False
        self._cpus = _allowed_cpus() if (
            pin_threads if pin_threads is not None else Config.PIN_THREADS
        ) else []
        self._workers: list[threading.Thread] = []

        try:
            for index in range(size):
                worker = threading.Thread(
                    target=self._work,
                    args=(index,),
                    name=f"{name}-{index}",
                    daemon=True,
                )
                worker.start()
                self._workers.append(worker)
        except RuntimeError as e:
            self.shutdown(wait=False)
            raise TunerError(
                f"Could not start {size} worker threads: {e}",
                {"started": len(self._workers)},
            ) from e
        logger.debug("Started pool %s with %d workers", name, size)

    def _work(self, index: int) -> None:
        if self._cpus:
            cpu = self._cpus[index % len(self._cpus)]
            try:
                os.sched_setaffinity(0, {cpu})
            except (AttributeError, OSError) as e:
                logger.debug("Could not pin %s-%d to cpu %d: %s", self.name, index, cpu, e)

        while True:
            task = self._queue.get()
            try:
                if task is None:
                    return
                _run(*task)
            finally:
                self._queue.task_done()

    def submit(self, fn: Callable[..., Any], *args: Any, **kwargs: Any) -> Future:
        """
        Queue a task.

        Returns:
            Future resolved with the task's result or exception

        Raises:
            PoolShutdownError: Pool has been shut down
        """
        future: Future = Future()
        with self._lock:
            if self._shutdown:
                raise PoolShutdownError(f"Pool {self.name} has been shut down")
            self._queue.put((future, fn, args, kwargs))
        return future

    def map(self, fn: Callable[[Any], Any], items: Iterable[Any]) -> list[Any]:
        """Run `fn` over items on the pool; results in input order."""
        futures = [self.submit(fn, item) for item in items]
        return [future.result() for future in futures]

    def join(self) -> None:
        """Block until every submitted task has completed."""
        self._queue.join()

    def shutdown(self, wait: bool = True) -> None:
        """Stop accepting tasks and stop the workers once the queue drains."""
        with self._lock:
            if self._shutdown:
                return
            self._shutdown = True
            for _ in self._workers:
                self._queue.put(None)
        if wait:
            for worker in self._workers:
                worker.join()
        logger.debug("Pool %s shut down", self.name)

    @property
    def is_shutdown(self) -> bool:
        return self._shutdown

    def __enter__(self) -> "Pool":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.shutdown(wait=True)


class SpawningPool:
    """
    Naive pool that spawns `size` new threads for every batch of tasks.

    Submitted tasks accumulate until `join`, which starts the threads; they
    take tasks from a list guarded by a single lock.
    """

    def __init__(self, size: int, name: str = "spawning-pool"):
        if size < 1:
            raise ValueError(f"Pool size must be at least 1, got {size}")
        self.size = size
        self.name = name
        self._lock = threading.Lock()
        self._pending: list[_Task] = []
        self._shutdown = False

    def submit(self, fn: Callable[..., Any], *args: Any, **kwargs: Any) -> Future:
        future: Future = Future()
        with self._lock:
            if self._shutdown:
                raise PoolShutdownError(f"Pool {self.name} has been shut down")
            self._pending.append((future, fn, args, kwargs))
        return future

    def _drain(self) -> None:
        while True:
            with self._lock:
                if not self._pending:
                    return
                task = self._pending.pop()
            _run(*task)

    def join(self) -> None:
        threads = [
            threading.Thread(target=self._drain, name=f"{self.name}-{i}", daemon=True)
            for i in range(self.size)
        ]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()

    def shutdown(self, wait: bool = True) -> None:
        with self._lock:
            self._shutdown = True
        if wait:
            self.join()

    def __enter__(self) -> "SpawningPool":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.shutdown(wait=True)


def _bench_once(pool_size: int, tasks: int, pool_factory: Callable[[int], Any]) -> tuple[float, int]:
    counter = 0
    counter_lock = threading.Lock()

    def increment() -> None:
        nonlocal counter
        with counter_lock:
            counter += 1

    with pool_factory(pool_size) as pool:
        start = time.perf_counter()
        for _ in range(tasks):
            pool.submit(increment)
        pool.join()
        elapsed = time.perf_counter() - start
    return elapsed, counter


def microbench(
    pool_size: int,
    tasks: Optional[int] = None,
    trials: Optional[int] = None,
    pool_factory: Callable[[int], Any] = Pool,
) -> BenchResult:
    """
    Time `tasks` increments of one lock-protected shared counter.

    Pool start-up is excluded; the median latency over `trials` runs is
    reported together with the final counter of the last run.

    Args:
        pool_size: Worker threads
        tasks: Increments to submit (default: Config.BENCH_TASKS)
        trials: Repetitions (default: Config.BENCH_TRIALS)
        pool_factory: Pool class to measure (Pool or SpawningPool)
    """
    if pool_size < 1:
        raise ValueError(f"Pool size must be at least 1, got {pool_size}")
    tasks = tasks if tasks is not None else Config.BENCH_TASKS
    trials = max(1, trials if trials is not None else Config.BENCH_TRIALS)

    latencies = []
    final_counter = 0
    for _ in range(trials):
        elapsed, final_counter = _bench_once(pool_size, tasks, pool_factory)
        latencies.append(elapsed)

    result = BenchResult(
        pool_size=pool_size,
        tasks=tasks,
        total_latency=statistics.median(latencies),
        final_counter=final_counter,
    )
    logger.info(
        "Pool of %d ran %d tasks in %.1f us (median of %d)",
        pool_size, tasks, result.total_latency_us, trials,
    )
    return result
