"""
Superpotential critical points and the non-resonance condition
"""

from typing import Any, Dict, List, Optional

from .base import mcp_tool, run_tool_pipeline, with_activity_logging, with_error_handling
from ..utils.logging_utils import get_logger

logger = get_logger(__name__)


@mcp_tool()
@with_activity_logging
@with_error_handling
async def compute_critical_point(
    k: int,
    B: str,
    a: Optional[str] = None,
    signs: Optional[List[int]] = None,
    order: str = "0",
    branch: Optional[int] = None,
    q_signs: Optional[List[int]] = None,
    orbifold_weight: str = "1/2",
    beta: Optional[str] = None,
    oracle: bool = True,
) -> Dict[str, Any]:
    """
    Solve dW = 0 for the orbifold superpotential of L_{k,B} up to T^order

    Exact rationals are passed and returned as "p/q" strings.

    Args:
        k: Number of circles (>= 1)
        B: Cap area, e.g. "2/5"; C = (1 - 2B)/(k - 1)
        a: Stabilisation parameter with 0 < a < B - C (default: half the supremum)
        signs: k-1 signs eps_i in {+1, -1} (default all +1)
        order: Highest monoid level to solve, e.g. "3/10"
        branch: Index of the root zeta (default: a real root when one exists)
        q_signs: Leading q-branch, k values in {+1, -1}
        orbifold_weight: Factor in front of the orbifold terms
        beta: Bulk parameter such as "T^1/5 + 0.5*T^3/10"
        oracle: Compare against the Newton oracle at T = 1e-2 and 1e-3

    Returns:
        Critical-point report: series p/q, residual valuations, Cartan check, oracle table
    """
    return await run_tool_pipeline("superpotential", {
        "k": k, "B": B, "a": a, "signs": signs, "order": order, "branch": branch,
        "q_signs": q_signs, "orbifold_weight": orbifold_weight, "beta": beta, "oracle": oracle,
    })


@mcp_tool()
@with_activity_logging
@with_error_handling
async def check_nonresonance_tool(
    r: List[str],
    rho: List[str],
    coeff_bound: int = 10,
) -> Dict[str, Any]:
    """
    Check the non-resonance condition for radii (r_i) and (rho_i)

    Args:
        r: Radii such as ["1", "sqrt(2)"]
        rho: Radii of the second factor, same length
        coeff_bound: Largest absolute integer coefficient searched

    Returns:
        holds, the ratio condition, and the first integer relation found (if any)
    """
    return await run_tool_pipeline("nonresonance", {"r": r, "rho": rho, "coeff_bound": coeff_bound})
