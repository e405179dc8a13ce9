"""
Recurrence tools: exhaustive small-window enumeration and the rotation oracle
"""

from typing import Any, Dict

from .base import mcp_tool, run_tool_pipeline, with_activity_logging, with_error_handling
from ..utils.logging_utils import get_logger

logger = get_logger(__name__)


@mcp_tool()
@with_activity_logging
@with_error_handling
async def recurrence_enumerate(k: int, window: int) -> Dict[str, Any]:
    """
    Minimum recurrence density over all difference sets in [1, window]
    without a red (k+1)-clique

    Args:
        k: Packing number; cliques of size k+1 are forbidden
        window: N, at most LAGCONF_MAX_WINDOW

    Returns:
        min_density as "p/q", a witness set, its clique certificate and the m - q bound tally
    """
    return await run_tool_pipeline("recurrence", {"mode": "enumerate", "k": k, "window": window})


@mcp_tool()
@with_activity_logging
@with_error_handling
async def recurrence_rotation(r: float, alpha: float = 0.6180339887498949, window: int = 100000) -> Dict[str, Any]:
    """
    Recurrence density of [0, r) under the rotation x -> x + alpha

    Args:
        r: Length of the target interval, in (0, 1)
        alpha: Rotation number (default: the golden ratio conjugate)
        window: Number of iterates N

    Returns:
        Measured density, 2r, and the floor 1/k - k/N with k = floor(1/r)
    """
    return await run_tool_pipeline("recurrence", {"mode": "rotation", "r": r, "alpha": alpha, "window": window})
