"""
Lagrangian Configuration Toolkit MCP server using FastMCP 2.0 with HTTP transport

Exposes the experiment pipelines as MCP tools:
- Critical points of the orbifold superpotential, with Newton oracle comparison
- Lagrangian estimators on radial profiles, tau convergence and the axiom suite
- Hofer flat bounds, u(r) sharpness and packing bounds
- Recurrence densities of clique-free difference sets and circle rotations
"""

# Third-party imports
from dotenv import load_dotenv
from fastmcp import FastMCP

# Local imports
from .core.config import settings
from .utils.logging_utils import setup_logging, get_logger

# Load environment variables
load_dotenv()

# Configure logging
setup_logging(settings.log_level)
logger = get_logger(__name__)

mcp: FastMCP = FastMCP("Lagrangian Configuration Toolkit")


# ============================================================================
# MCP TOOL DEFINITIONS
# ============================================================================

# Set MCP instance for tool modules before importing
# This allows the @mcp_tool() decorators in the modules to register tools
from .tools.base import set_mcp_instance
set_mcp_instance(mcp)

# Imports needed for side effects (tool registration), not direct usage
from .tools import (  # noqa: F401, E402
    superpotential_tools,
    estimator_tools,
    hofer_tools,
    recurrence_tools,
)

# The 9 tools exposed are:
# 1. compute_critical_point, 2. check_nonresonance_tool (superpotential_tools)
# 3. evaluate_estimator, 4. tau_convergence, 5. run_axiom_suite (estimator_tools)
# 6. flat_bounds, 7. packing_bounds (hofer_tools)
# 8. recurrence_enumerate, 9. recurrence_rotation (recurrence_tools)


# ============================================================================
# SERVER STARTUP AND CONFIGURATION
# ============================================================================

def main():
    """Main entry point for FastMCP server"""
    try:
        logger.info("Lagrangian Configuration Toolkit with FastMCP 2.0")
        logger.info(f"Worker pool cap: {settings.workers}")
        logger.info(f"HTTP Server: {settings.host}:{settings.port}")

        mcp.run(
            transport="http",
            host=settings.host,
            port=settings.port,
            path="/mcp"
        )

    except Exception as e:
        logger.error(f"Error starting server: {e}")
        import sys
        sys.exit(1)


if __name__ == "__main__":
    main()
