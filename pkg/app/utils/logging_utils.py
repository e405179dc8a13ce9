"""
Logging shared by the command line, the MCP server and pool workers

Records go to stderr; stdout carries only JSON/CSV artifacts.
"""

import logging
import sys
from contextlib import contextmanager
from typing import Iterator, Optional, Union

from .datetime_utils import format_duration_ms, utc_now

DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Per-request chatter from the HTTP transport
NOISY_LOGGERS = ("uvicorn.access", "mcp.server.lowlevel.server")


def get_logger(name: str) -> logging.Logger:
    """Module logger (pass __name__); its level comes from setup_logging"""
    return logging.getLogger(name)


def resolve_level(level: Union[int, str]) -> int:
    """
    Numeric level from an int or a level name such as "debug"

    Unknown names fall back to INFO so a typo in LAGCONF_LOG_LEVEL never
    stops a run.
    """
    if isinstance(level, int):
        return level
    resolved = logging.getLevelName(str(level).strip().upper())
    return resolved if isinstance(resolved, int) else logging.INFO


def setup_logging(level: Union[int, str] = logging.INFO, format_string: Optional[str] = None):
    """
    Configure the root logger

    Args:
        level: Level or level name (default: INFO)
        format_string: Custom format string (optional)
    """
    level = resolve_level(level)
    logging.basicConfig(
        level=level,
        format=format_string or DEFAULT_FORMAT,
        stream=sys.stderr,
        force=True  # Override any existing configuration
    )
    for name in NOISY_LOGGERS:
        logging.getLogger(name).setLevel(max(level, logging.WARNING))


@contextmanager
def log_duration(logger: logging.Logger, label: str) -> Iterator[None]:
    """Log how long the enclosed block took, also when it raises"""
    start_time = utc_now()
    try:
        yield
    finally:
        logger.info(f"{label} finished in {format_duration_ms(start_time)} ms")
