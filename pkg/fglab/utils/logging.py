from __future__ import annotations

import sys
from pathlib import Path
from typing import Optional

from loguru import logger

LOG_FORMAT = "<level>{level: <8}</level> {name}:{line} {message}"
LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")


def _stderr(message: str) -> None:
    # looked up per message: sys.stderr may be swapped after setup
    sys.stderr.write(message)


def setup_logging(level: str = "WARNING", log_file: Optional[str | Path] = None) -> None:
    """Route fglab logs to stderr at ``level``; optionally also to ``log_file`` at DEBUG."""
    level = level.upper()
    if level not in LEVELS:
        raise ValueError(f"unknown log level '{level}' (expected one of {', '.join(LEVELS)})")
    logger.remove()
    logger.add(_stderr, level=level, format=LOG_FORMAT, colorize=False)
    if log_file is not None:
        logger.add(str(log_file), level="DEBUG", format=LOG_FORMAT, encoding="utf-8")
