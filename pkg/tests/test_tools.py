import asyncio

import pytest

from app.core.constants import RESPONSE_ERROR, RESPONSE_SUCCESS
from app.core.exceptions import OracleDivergenceError, ValidationError
from app.tools import base
from app.tools.base import mcp_tool, run_tool_pipeline, with_activity_logging, with_error_handling


class _RecordingMCP:
    def __init__(self):
        self.registered = []

    def tool(self, *args, **kwargs):
        def register(func):
            self.registered.append(func.__name__)
            return func
        return register


def test_pipeline_result_is_wrapped(single_worker):
    response = asyncio.run(run_tool_pipeline("estimate", {
        "kind": "zeta0", "profile": "poly:[0,0,1]", "k": 2, "B": "2/5", "a": None,
    }))
    assert response[RESPONSE_SUCCESS] is True
    assert response["value"] == "1/100"


def test_sweep_through_tool_pipeline(single_worker):
    response = asyncio.run(run_tool_pipeline("estimate", {
        "kind": "zeta0", "profile": "poly:[0,0,1]", "ks": [2, 3], "Bs": ["2/5"],
    }))
    assert [row["k"] for row in response["rows"]] == [2, 3]


def test_toolkit_errors_become_error_responses():
    @with_activity_logging
    @with_error_handling
    async def reject(B: str):
        raise ValidationError("C < B violated", {"B": B})

    response = asyncio.run(reject("1/4"))
    assert response[RESPONSE_SUCCESS] is False
    assert response[RESPONSE_ERROR] == "C < B violated"
    assert response["error_type"] == "ValidationError"
    assert response["details"] == {"B": "1/4"}


def test_numerical_errors_keep_their_type():
    @with_error_handling
    async def diverge():
        raise OracleDivergenceError("no convergence", {"t": 0.01})

    assert asyncio.run(diverge())["error_type"] == "OracleDivergenceError"


def test_unexpected_errors_are_internal():
    @with_error_handling
    async def crash():
        raise RuntimeError("boom")

    response = asyncio.run(crash())
    assert response["error_type"] == "InternalError"
    assert "boom" in response[RESPONSE_ERROR]


def test_invalid_parameters_surface_as_validation_errors():
    @with_error_handling
    async def estimate():
        return await run_tool_pipeline("estimate", {"kind": "zeta0", "profile": "const:1", "k": 0, "B": "2/5"})

    response = asyncio.run(estimate())
    assert response["error_type"] == "ValidationError"
    assert response["details"]["errors"][0]["field"] == "k"


def test_activity_logging_passes_results_through():
    @with_activity_logging
    async def echo(x: int, y: int = 2):
        return {"sum": x + y}

    assert asyncio.run(echo(1)) == {"sum": 3}


def test_mcp_tool_registers_with_the_instance(monkeypatch):
    recorder = _RecordingMCP()
    monkeypatch.setattr(base, "mcp", recorder)

    @mcp_tool()
    async def sample():
        return {}

    @mcp_tool
    async def bare_sample():
        return {}

    assert recorder.registered == ["sample", "bare_sample"]


def test_mcp_tool_needs_an_instance(monkeypatch):
    monkeypatch.setattr(base, "mcp", None)
    with pytest.raises(RuntimeError):
        @mcp_tool()
        async def orphan():
            return {}
