"""
MCP tools for the Lagrangian configuration toolkit
"""

from .base import mcp_tool, run_tool_pipeline, set_mcp_instance, with_activity_logging, with_error_handling

__all__ = [
    "mcp_tool",
    "run_tool_pipeline",
    "set_mcp_instance",
    "with_activity_logging",
    "with_error_handling",
]
