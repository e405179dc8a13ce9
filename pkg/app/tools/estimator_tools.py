"""
Lagrangian estimator tools: single values, sweeps, tau convergence and the axiom suite
"""

from typing import Any, Dict, List, Optional

from .base import mcp_tool, run_tool_pipeline, with_activity_logging, with_error_handling
from ..utils.logging_utils import get_logger

logger = get_logger(__name__)


@mcp_tool()
@with_activity_logging
@with_error_handling
async def evaluate_estimator(
    kind: str,
    profile: str,
    k: Optional[int] = None,
    B: Optional[str] = None,
    a: Optional[str] = None,
    ks: Optional[List[int]] = None,
    Bs: Optional[List[str]] = None,
) -> Dict[str, Any]:
    """
    Evaluate c0, zeta0, mu0 or tau on a radial profile

    Profiles use the grammar const:c, poly:[c0,c1,...]@[a,b],
    bump:center,width,height and indicator-smooth:r,delta joined by '+'.
    Passing ks and Bs sweeps the (k, B) grid instead of a single configuration.

    Args:
        kind: One of c0, zeta0, mu0, tau
        profile: Profile expression, e.g. "bump:0,1/10,1"
        k: Number of circles (single evaluation)
        B: Cap area (single evaluation)
        a: Stabilisation parameter (default: half the supremum)
        ks: Sweep values of k
        Bs: Sweep values of B

    Returns:
        {value} for a single configuration or {rows: [{k, B, kind, value}]} for a sweep
    """
    return await run_tool_pipeline("estimate", {
        "kind": kind, "profile": profile, "k": k, "B": B, "a": a, "ks": ks, "Bs": Bs,
    })


@mcp_tool()
@with_activity_logging
@with_error_handling
async def tau_convergence(
    B: str,
    profile: str = "poly:[0,1]@[0,1/2]",
    k_max: int = 10000,
) -> Dict[str, Any]:
    """
    Limit of tau_{k,B}(h) as k grows, against both closed-form candidates

    Args:
        B: Cap area in (0, 1/2)
        profile: Profile vanishing on [-1/2, 0] (default h(s) = max(s, 0))
        k_max: Largest k in the convergence table

    Returns:
        Table of tau values, extrapolated limit, candidates, matches and rate exponent
    """
    return await run_tool_pipeline("tau-convergence", {"B": B, "profile": profile, "k_max": k_max})


@mcp_tool()
@with_activity_logging
@with_error_handling
async def run_axiom_suite(
    k: int,
    B: str,
    a: Optional[str] = None,
    samples: int = 200,
    seed: int = 0,
) -> Dict[str, Any]:
    """
    Check monotonicity, normalization, Lipschitz, Lagrangian control, Calabi and
    additivity on seeded random piecewise-cubic profiles

    Args:
        k: Number of circles
        B: Cap area
        a: Stabilisation parameter (default: half the supremum)
        samples: Number of random profiles
        seed: Random seed

    Returns:
        Per-check case counts and maximum violations, plus the quasi-state counterexample
    """
    return await run_tool_pipeline("axioms", {"k": k, "B": B, "a": a, "samples": samples, "seed": seed})
