"""
UTC timestamps for MCP responses and tool timing
"""

from datetime import datetime, timezone
from typing import Optional


def utc_now() -> datetime:
    """Current time, timezone-aware UTC"""
    return datetime.now(timezone.utc)


def utc_now_iso() -> str:
    """Current UTC time as ISO 8601, the timestamp field of every tool response"""
    return utc_now().isoformat()


def format_duration_ms(start_time: datetime, end_time: Optional[datetime] = None) -> float:
    """
    Milliseconds between two datetimes, rounded to 0.01 ms

    Args:
        start_time: When the tool call started
        end_time: When it finished (default: now)
    """
    end_time = utc_now() if end_time is None else end_time
    return round((end_time - start_time).total_seconds() * 1000, 2)
