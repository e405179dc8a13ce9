import json
import logging
import math
from datetime import datetime, timedelta, timezone
from fractions import Fraction

import numpy as np
import pytest

from app.core.constants import RESPONSE_ERROR, RESPONSE_SUCCESS, RESPONSE_TIMESTAMP
from app.services.configuration import make_config
from app.utils.datetime_utils import format_duration_ms, utc_now_iso
from app.utils.logging_utils import log_duration, resolve_level
from app.utils.pool_utils import effective_workers, parallel_map
from app.utils.rational_utils import (
    format_order,
    format_rational,
    parse_order,
    parse_rational,
    rational_grid,
)
from app.utils.response_utils import dump_csv, dump_json, error_response, success_response, to_jsonable


# ============================================================================
# RATIONALS
# ============================================================================

def test_parse_rational_forms():
    assert parse_rational("2/5") == Fraction(2, 5)
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational(3) == Fraction(3)
    with pytest.raises(ValueError):
        parse_rational(0.1)
    with pytest.raises(ValueError):
        parse_rational(True)


def test_format_rational_always_has_denominator():
    assert format_rational(Fraction(1, 5)) == "1/5"
    assert format_rational(Fraction(2)) == "2/1"


def test_orders():
    assert parse_order("inf") == math.inf
    assert parse_order("3/10") == Fraction(3, 10)
    assert format_order(math.inf) == "inf"
    with pytest.raises(ValueError):
        format_order(-math.inf)


def test_rational_grid_is_open_at_both_ends():
    assert rational_grid(Fraction(1, 4), Fraction(1, 2), 10) == [Fraction(3, 10), Fraction(2, 5)]


# ============================================================================
# RESPONSES AND ARTIFACTS
# ============================================================================

def test_to_jsonable_conversions():
    value = to_jsonable({
        "ratio": Fraction(1, 2),
        "order": math.inf,
        "z": 1 + 2j,
        "set": {3, 1},
        "pair": (np.int64(4), np.float64(0.5)),
        "config": make_config(2, Fraction(2, 5), Fraction(1, 10)),
    })
    assert value == {
        "ratio": "1/2",
        "order": "inf",
        "z": {"re": 1.0, "im": 2.0},
        "set": [1, 3],
        "pair": [4, 0.5],
        "config": {"k": 2, "B": "2/5", "C": "1/5", "a": "1/10"},
    }


def test_to_jsonable_rejects_unknown_objects():
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_dump_json_is_canonical():
    first = dump_json({"b": Fraction(1, 3), "a": [math.inf]})
    second = dump_json({"a": [math.inf], "b": Fraction(1, 3)})
    assert first == second
    assert first.endswith("\n")
    assert json.loads(first) == {"a": ["inf"], "b": "1/3"}


def test_success_response_shape():
    response = success_response({"value": Fraction(1, 100)}, kind="zeta0")
    assert response[RESPONSE_SUCCESS] is True
    assert response["value"] == "1/100"
    assert response["kind"] == "zeta0"
    assert RESPONSE_TIMESTAMP in response


def test_error_response_shape():
    response = error_response("C < B violated", error_type="ValidationError", details={"B": Fraction(1, 4)})
    assert response[RESPONSE_SUCCESS] is False
    assert response[RESPONSE_ERROR] == "C < B violated"
    assert response["details"] == {"B": "1/4"}


def test_dump_csv_cells():
    text = dump_csv([
        {"k": 2, "B": Fraction(2, 5), "sharp": True, "extra": None},
        {"k": 3, "B": Fraction(3, 10), "sharp": False, "extra": [1, 2]},
    ], ["k", "B", "sharp", "extra"])
    assert text.splitlines() == ["k,B,sharp,extra", "2,2/5,true,", '3,3/10,false,"[1, 2]"']


def test_dump_csv_defaults_to_first_row_keys():
    assert dump_csv([{"x": 1, "y": 2}]).splitlines()[0] == "x,y"
    assert dump_csv([]) == "\n"


# ============================================================================
# TIME AND WORKERS
# ============================================================================

def test_duration_in_milliseconds():
    start = datetime(2024, 1, 1, tzinfo=timezone.utc)
    assert format_duration_ms(start, start + timedelta(milliseconds=12.345)) == pytest.approx(12.35, abs=0.01)


def test_timestamp_is_utc_iso():
    assert utc_now_iso().endswith("+00:00")


def test_worker_cap(monkeypatch):
    from app.core.config import settings
    monkeypatch.setattr(settings, "workers", 3)
    assert effective_workers(None, 10) == 3
    assert effective_workers(8, 10) == 3
    assert effective_workers(2, 1) == 1


def test_parallel_map_preserves_order(single_worker):
    assert parallel_map(abs, [-3, 1, -2]) == [3, 1, 2]


def test_log_levels_resolve_by_name():
    assert resolve_level("debug") == logging.DEBUG
    assert resolve_level(logging.WARNING) == logging.WARNING
    assert resolve_level("chatty") == logging.INFO


def test_log_duration_reports_even_on_failure(caplog):
    logger = logging.getLogger("lagconf.test")
    with caplog.at_level(logging.INFO, logger="lagconf.test"):
        with pytest.raises(ValueError):
            with log_duration(logger, "enumeration"):
                raise ValueError("stop")
    assert "enumeration finished in" in caplog.text
