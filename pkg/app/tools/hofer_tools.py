"""
Hofer-geometry tools: flat lower bounds and packing / asymptotic-norm bounds
"""

from typing import Any, Dict, List, Optional

from .base import mcp_tool, run_tool_pipeline, with_activity_logging, with_error_handling
from ..utils.logging_utils import get_logger

logger = get_logger(__name__)


@mcp_tool()
@with_activity_logging
@with_error_handling
async def flat_bounds(
    profile: str,
    a: Optional[str] = None,
    approximants: int = 12,
    mode: str = "bounds",
    k: Optional[int] = None,
    B: Optional[str] = None,
) -> Dict[str, Any]:
    """
    Lower bounds for the Hofer distance of flat embeddings

    mode "bounds" bounds Phi(h) for an even profile supported in (-b, b), b < 1/6,
    using rational approximants; mode "phi-k" evaluates the ker-Calabi flat for
    a zero-mean profile supported in I_k.

    Args:
        profile: Profile expression
        a: Stabilisation parameter, 0 < a < 1/2 - 3b (mode "bounds")
        approximants: Number of rational approximants (mode "bounds")
        mode: "bounds" or "phi-k"
        k: Flat index (mode "phi-k")
        B: Cap area in (1/(k+1), 1/k) (mode "phi-k")

    Returns:
        Rows {x, value, running_bound} with lower/upper bounds, or the Phi_k report
    """
    return await run_tool_pipeline("flat", {
        "mode": mode, "profile": profile, "a": a, "approximants": approximants, "k": k, "B": B,
    })


@mcp_tool()
@with_activity_logging
@with_error_handling
async def packing_bounds(
    mode: str = "u_r",
    r: Optional[str] = None,
    delta: str = "1/1000",
    a: Optional[str] = None,
    rs: Optional[List[str]] = None,
    l: Optional[int] = None,
    area: Optional[str] = None,
    rho_g: Optional[float] = None,
    d_g: Optional[float] = None,
) -> Dict[str, Any]:
    """
    Asymptotic-norm sharpness u(r) = 1/k and packing bounds

    Args:
        mode: "u_r", "grid", "stabilized", "number", "sikorav" or "bilipschitz"
        r: Area below the circle, strictly between 1/(k+1) and 1/k
        delta: Smoothing width of the indicator profile
        a: Stabilisation parameter
        rs: Radii for mode "grid" (default: a rational grid over (1/4, 1/2))
        l: Packing size (mode "sikorav")
        area: Support area (mode "sikorav")
        rho_g: Spectral norm of g (mode "bilipschitz")
        d_g: Hofer distance of g to the identity (mode "bilipschitz")

    Returns:
        {r, delta, k, lower, upper, sharp} or the mode's report
    """
    return await run_tool_pipeline("packing", {
        "mode": mode, "r": r, "delta": delta, "a": a, "rs": rs, "l": l, "area": area,
        "rho_g": rho_g, "d_g": d_g,
    })
