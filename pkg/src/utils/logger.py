"""Structured logging utility for the NV holonomy simulator."""

import logging
import sys

LOG_FORMAT = "%(asctime)s | %(name)s | %(levelname)s | %(message)s"


def _level(name: str | None) -> int:
    if name is None:
        from src.config import get_config

        name = get_config().LOG_LEVEL
    return getattr(logging, name.upper(), logging.INFO)


def get_logger(name: str) -> logging.Logger:
    """Get a configured logger with structured output.

    Args:
        name: Logger name, typically the command or scenario name.

    Returns:
        Configured logger instance.
    """
    logger = logging.getLogger(f"nvholo.{name}")

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stdout)
        level = _level(None)
        handler.setLevel(level)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
        logger.setLevel(level)
        logger.propagate = False

    return logger


def configure_logging(level: str | None = None) -> None:
    """Route library loggers (``src.*``) through one stderr handler for CLI runs."""
    root = logging.getLogger()
    resolved = _level(level)
    if not any(getattr(h, "_nvholo", False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._nvholo = True  # type: ignore[attr-defined]
        root.addHandler(handler)
    root.setLevel(resolved)
