"""
Base functionality for MCP tools including decorators and shared utilities
"""

import asyncio
import functools
import inspect
from typing import Any, Callable, Dict, Mapping

from ..core.exceptions import LagconfError
from ..services.experiments import run_pipeline
from ..utils.datetime_utils import format_duration_ms, utc_now
from ..utils.logging_utils import get_logger
from ..utils.response_utils import error_response, success_response

logger = get_logger(__name__)

# Global server reference
mcp = None


def set_mcp_instance(mcp_instance):
    """Set the global MCP instance for tools to use"""
    global mcp
    mcp = mcp_instance


def mcp_tool(*args, **kwargs):
    """Wrapper for mcp.tool() decorator that uses the global mcp instance"""
    def decorator(func):
        if mcp is None:
            raise RuntimeError("MCP instance not set. Call set_mcp_instance() first.")
        return mcp.tool(*args, **kwargs)(func)

    if args and callable(args[0]):
        return decorator(args[0])
    return decorator


def with_error_handling(func: Callable) -> Callable:
    """Turn toolkit exceptions into error_response payloads"""
    @functools.wraps(func)
    async def wrapper(*args, **kwargs):
        try:
            return await func(*args, **kwargs)
        except LagconfError as e:
            logger.warning(f"{func.__name__} rejected: {e.message} {e.details}")
            return error_response(e.message, error_type=type(e).__name__, details=e.details)
        except Exception as e:
            logger.error(f"Error in {func.__name__}: {str(e)}", exc_info=True)
            return error_response(f"Tool execution failed: {str(e)}", error_type="InternalError")
    return wrapper


def _request_data(func: Callable, args, kwargs) -> Dict[str, Any]:
    bound = inspect.signature(func).bind(*args, **kwargs)
    bound.apply_defaults()
    return {name: value for name, value in bound.arguments.items() if name not in ("self", "cls", "ctx")}


def with_activity_logging(func: Callable) -> Callable:
    """Log tool name, arguments, outcome and duration of every call"""
    @functools.wraps(func)
    async def wrapper(*args, **kwargs):
        start_time = utc_now()
        request_data = _request_data(func, args, kwargs)
        logger.info(f"Tool call {func.__name__} {request_data}")
        try:
            result = await func(*args, **kwargs)
        except Exception as e:
            logger.info(f"Tool error {func.__name__} after {format_duration_ms(start_time)} ms: {e}")
            raise
        success = result.get("success", True) if isinstance(result, dict) else True
        logger.info(f"Tool done {func.__name__} success={success} in {format_duration_ms(start_time)} ms")
        return result
    return wrapper


async def run_tool_pipeline(subcommand: str, params: Mapping[str, Any]) -> Dict[str, Any]:
    """Run a pipeline off the event loop; None-valued parameters fall back to defaults"""
    data = {name: value for name, value in params.items() if value is not None}
    report = await asyncio.to_thread(run_pipeline, subcommand, data)
    return success_response(report)
