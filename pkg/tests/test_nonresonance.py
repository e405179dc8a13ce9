import math

import pytest

from app.core.exceptions import ValidationError
from app.services.nonresonance import (
    check_nonresonance,
    exhaustive_relation,
    pslq_relation,
    radii_from_strings,
    relation_residual,
)


def test_shared_radius_is_resonant():
    report = check_nonresonance([1, 2], [1, 3], 5)
    assert not report.holds
    assert report.relation is not None
    assert relation_residual([1, 2], [1, 3], report.relation) < 1e-9


def test_ratio_condition_violation_is_reported():
    report = check_nonresonance([2, 1], [1, 3], 5)
    assert not report.holds
    assert not report.ratio_condition
    assert report.ratio_violation == (0, 1)


def test_independent_square_roots_are_nonresonant():
    r = [1.0, math.sqrt(2)]
    rho = [math.sqrt(3), math.sqrt(5)]
    report = check_nonresonance(r, rho, 3)
    assert report.ratio_condition
    assert report.relation is None
    assert report.holds
    assert report.method == "exhaustive"


def test_trivial_relation_is_excluded():
    assert exhaustive_relation([1.0], [math.sqrt(2)], 4, 1e-9) is None


def test_exhaustive_search_finds_bounded_relation():
    relation = exhaustive_relation([1.0, math.sqrt(2)], [math.sqrt(2) + 1, 7.0], 2, 1e-9)
    assert relation is not None
    assert relation_residual([1.0, math.sqrt(2)], [math.sqrt(2) + 1, 7.0], relation) < 1e-9


def test_pslq_used_above_three_circles():
    r = [1.0, math.sqrt(2), math.sqrt(3), math.sqrt(5)]
    rho = [2.0, math.sqrt(7), math.sqrt(11), math.sqrt(13)]
    report = check_nonresonance(r, rho, 5)
    assert report.method == "pslq"
    assert report.relation is not None
    assert relation_residual(r, rho, report.relation) < 1e-9


def test_pslq_respects_coefficient_bound():
    assert pslq_relation([1.0], [1000.0], 10, 1e-12) is None


def test_input_validation():
    with pytest.raises(ValidationError):
        check_nonresonance([1, 2], [1], 5)
    with pytest.raises(ValidationError):
        check_nonresonance([1, -2], [1, 3], 5)
    with pytest.raises(ValidationError):
        check_nonresonance([1, 2], [1, 3], 0)


def test_report_json():
    data = check_nonresonance([2, 1], [1, 3], 5).to_json()
    assert data["holds"] is False
    assert data["ratio_violation"] == [0, 1]


def test_radii_from_strings():
    assert radii_from_strings(["1", "sqrt(2)", "1.5"]) == pytest.approx([1.0, math.sqrt(2), 1.5])
    with pytest.raises(ValidationError):
        radii_from_strings(["one"])
