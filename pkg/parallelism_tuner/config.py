"""Configuration management for the parallelism tuner."""

import os
from typing import Optional


def _env_flag(name: str, default: str = "") -> bool:
    return os.getenv(name, default).lower() in ("true", "1", "yes")


def _env_optional_int(name: str) -> Optional[int]:
    value = os.getenv(name)
    return int(value) if value else None


class Config:
    """Tuner configuration with environment variable support."""

    # Logging
    LOG_LEVEL: str = os.getenv("PARTUNE_LOG_LEVEL", "INFO")
    """Log level for the parallelism_tuner logger."""

    VERBOSE: bool = _env_flag("PARTUNE_VERBOSE")
    """Enable verbose (DEBUG) logging."""

    # Reports
    DEFAULT_FORMAT: str = os.getenv("PARTUNE_FORMAT", "text")
    """Report format used when --format is not given (text, json or csv)."""

    # Simulator
    OVERSUBSCRIPTION_PENALTY: float = float(
        os.getenv("PARTUNE_OVERSUBSCRIPTION_PENALTY", "0.1")
    )
    """Slowdown per unit of oversubscription in the penalized simulation variant."""

    # Benchmarks
    BENCH_TRIALS: int = int(os.getenv("PARTUNE_BENCH_TRIALS", "3"))
    """Trials per benchmark point; the median latency is reported."""

    BENCH_TASKS: int = int(os.getenv("PARTUNE_BENCH_TASKS", "10000"))
    """Tasks submitted by the thread-pool microbenchmark."""

    PREP_PASSES: int = int(os.getenv("PARTUNE_PREP_PASSES", "1"))
    """Data-preparation passes run by the MatMul operator designs."""

    KERNEL_BLOCK: int = int(os.getenv("PARTUNE_KERNEL_BLOCK", "64"))
    """Row-tile size of the blocked MatMul kernel."""

    PIN_THREADS: bool = _env_flag("PARTUNE_PIN_THREADS")
    """Pin pool workers round-robin to cores (best effort, Linux only)."""

    PHYSICAL_CORES: Optional[int] = _env_optional_int("PARTUNE_PHYSICAL_CORES")
    """Physical core count override for benchmarks (None = detect)."""

    @classmethod
    def update(cls, **kwargs) -> None:
        """Update configuration at runtime.

        Args:
            **kwargs: Configuration key-value pairs
        """
        for key, value in kwargs.items():
            if hasattr(cls, key):
                setattr(cls, key, value)
