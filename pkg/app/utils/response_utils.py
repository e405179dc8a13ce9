"""
Standardized response formatting utilities for MCP tools and CLI artifacts

Reports are first made JSON-safe with to_jsonable: exact rationals become
"p/q" strings, infinite orders become "inf", complex numbers {re, im}.
"""

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..core.constants import RESPONSE_ERROR, RESPONSE_SUCCESS, RESPONSE_TIMESTAMP
from .datetime_utils import utc_now_iso
from .rational_utils import INFINITY_TOKEN, format_rational


def to_jsonable(value: Any) -> Any:
    """
    Convert a report into plain JSON types

    Objects exposing to_json() are converted through it; sets are sorted;
    tuples become lists; dictionary keys become strings.

    Example:
        >>> to_jsonable({"min_density": Fraction(1, 2), "order": math.inf})
        {"min_density": "1/2", "order": "inf"}
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float):
        if math.isinf(value):
            return INFINITY_TOKEN if value > 0 else "-" + INFINITY_TOKEN
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, complex):
        return {"re": to_jsonable(value.real), "im": to_jsonable(value.imag)}
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (set, frozenset)):
        return [to_jsonable(item) for item in sorted(value)]
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_jsonable(item) for item in value]
    if hasattr(value, "to_json"):
        return to_jsonable(value.to_json())
    raise TypeError(f"cannot serialise {type(value).__name__}")


def dump_json(report: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline"""
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def success_response(data: Optional[Dict[str, Any]] = None, **kwargs) -> Dict[str, Any]:
    """
    Create a standardized success response

    Args:
        data: Optional report to include in response (made JSON-safe)
        **kwargs: Additional fields to include in response

    Returns:
        Standardized success response dictionary

    Example:
        >>> success_response({"value": Fraction(1, 2)}, kind="zeta0")
        {"success": True, "timestamp": "2024-01-01T00:00:00Z", "value": "1/2", "kind": "zeta0"}
    """
    response = {
        RESPONSE_SUCCESS: True,
        RESPONSE_TIMESTAMP: utc_now_iso()
    }

    if data:
        response.update(to_jsonable(data))

    if kwargs:
        response.update(to_jsonable(kwargs))

    return response


def error_response(error: str, **kwargs) -> Dict[str, Any]:
    """
    Create a standardized error response

    Args:
        error: Error message describing what went wrong
        **kwargs: Additional fields (error_type, details, ...)

    Returns:
        Standardized error response dictionary

    Example:
        >>> error_response("C < B violated", error_type="ValidationError")
        {"success": False, "error": "C < B violated", "timestamp": "...", "error_type": "ValidationError"}
    """
    response = {
        RESPONSE_SUCCESS: False,
        RESPONSE_ERROR: error,
        RESPONSE_TIMESTAMP: utc_now_iso()
    }

    if kwargs:
        response.update(to_jsonable(kwargs))

    return response


def dump_csv(rows: List[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    """
    CSV text for tabular reports; rationals stay "p/q", booleans are lowercase

    Args:
        rows: Report rows in output order
        columns: Column order (default: keys of the first row)
    """
    columns = list(columns) if columns is not None else (list(rows[0].keys()) if rows else [])
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        cells = []
        for column in columns:
            cell = to_jsonable(row.get(column))
            if isinstance(cell, bool):
                cell = "true" if cell else "false"
            elif isinstance(cell, (dict, list)):
                cell = json.dumps(cell, sort_keys=True)
            cells.append("" if cell is None else cell)
        writer.writerow(cells)
    return buffer.getvalue()
