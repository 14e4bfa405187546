"""
Logging and utility functions for the parallelism tuner.

Provides:
- Logging configuration
- Input digests and atomic file output
- Common constants
"""

import contextlib
import hashlib
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Union

from .config import Config


def setup_logging(
    level: Optional[str] = None,
    format_string: Optional[str] = None
) -> None:
    """
    Set up logging for the parallelism tuner.

    Logs go to stderr so that reports printed on stdout stay byte-identical.

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR)
        format_string: Custom log format string
    """
    log_level = level or ("DEBUG" if Config.VERBOSE else Config.LOG_LEVEL)

    if format_string is None:
        format_string = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format=format_string,
        stream=sys.stderr
    )

    logger = logging.getLogger("parallelism_tuner")
    logger.setLevel(getattr(logging, log_level.upper()))

    # Suppress noisy third-party loggers
    logging.getLogger("hypothesis").setLevel(logging.WARNING)
    logging.getLogger("matplotlib").setLevel(logging.WARNING)


def sha256_text(text: str) -> str:
    """Hex SHA-256 digest of a text payload."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def write_atomic(path: Union[str, Path], content: str) -> Path:
    """
    Write text to a file atomically.

    The content goes to a temporary file in the destination directory that
    is then renamed over the target, so readers never observe a partial file.

    Args:
        path: Destination path
        content: Text to write

    Returns:
        The destination path
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(content)
        os.replace(tmp_name, target)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp_name)
        raise
    return target


# Constants
HEAVY_KINDS = ("Conv", "MatMul", "Embedding")
FP32_BYTES = 4
EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_USAGE_ERROR = 2
