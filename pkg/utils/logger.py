"""
Logging utility for the Ahlfors toolkit
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Dict, Optional

ROOT_LOGGER = "ahlfors"

CONSOLE_FORMAT = '%(levelname)s - %(message)s'
FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s'


def setup_logger(
    name: str = ROOT_LOGGER,
    level: str = "INFO",
    log_file: Optional[str] = None,
    max_bytes: int = 10485760,
    backup_count: int = 5
) -> logging.Logger:
    """
    Set up and configure logger.

    Console output goes to stderr; stdout carries only command results
    such as "gamma=..." and "valence=...".

    Args:
        name: Logger name
        level: Logging level
        log_file: Path to log file (rotated)
        max_bytes: Maximum log file size
        backup_count: Number of backup files

    Returns:
        Configured logger instance
    """
    numeric_level = getattr(logging, level.upper())
    logger = logging.getLogger(name)
    logger.setLevel(numeric_level)
    logger.propagate = False
    logger.handlers = []

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(numeric_level)
    console.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    logger.addHandler(console)

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        rotating = RotatingFileHandler(log_file, maxBytes=max_bytes, backupCount=backup_count)
        # Solver iterations are logged at DEBUG; keep them in the file regardless of console level.
        rotating.setLevel(logging.DEBUG)
        rotating.setFormatter(logging.Formatter(FILE_FORMAT))
        logger.addHandler(rotating)
        logger.setLevel(logging.DEBUG)

    return logger


def setup_from_config(config: Dict, verbose: bool = False) -> logging.Logger:
    """Configure the root toolkit logger from the `logging` config section."""
    section = config.get('logging', {}) or {}
    level = 'DEBUG' if verbose else str(section.get('level', 'INFO'))
    return setup_logger(ROOT_LOGGER, level=level, log_file=section.get('file') or None)


def get_logger(name: str = ROOT_LOGGER) -> logging.Logger:
    """Logger below the `ahlfors` root, so one setup call covers every module."""
    if name == ROOT_LOGGER or name.startswith(ROOT_LOGGER + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")
