from fractions import Fraction

import pytest

from app.core.exceptions import ValidationError
from app.services.recurrence import (
    DifferenceSet,
    RotationModel,
    density_bound_check,
    enumerate_and_verify,
    has_delta_clique,
    max_delta_clique,
    recurrence_set,
    rotation_densities,
    schur_free,
    subset_recurrence_check,
)

ODDS = DifferenceSet.of([1, 3, 5, 7, 9], 9)


def test_difference_set_window():
    with pytest.raises(ValidationError):
        DifferenceSet.of([0, 2], 5)
    with pytest.raises(ValidationError):
        DifferenceSet.of([6], 5)


def test_coloring_is_translation_invariant():
    assert ODDS.color(4, 7) == ODDS.color(104, 107) == "red"
    assert ODDS.color(2, 6) == "blue"
    with pytest.raises(ValidationError):
        ODDS.color(3, 3)


def test_odd_differences_have_no_triangle():
    assert not has_delta_clique(ODDS, 3)
    assert has_delta_clique(ODDS, 2)
    assert schur_free(ODDS.D)


def test_triangle_found():
    d = DifferenceSet.of([2, 3, 5], 5)
    assert has_delta_clique(d, 3)
    assert max_delta_clique(d) == (0, 2, 5)
    assert not schur_free(d.D)


def test_recurrence_set_is_the_complement():
    assert recurrence_set(ODDS) == frozenset({2, 4, 6, 8})


def test_density_bound_on_odds():
    report = density_bound_check(DifferenceSet.of([1, 3, 5, 7, 9], 10), 2, 5)
    assert report["clique"] == [0, 1]
    assert report["count"] == 5
    assert report["bound"] == 4
    assert report["holds"]


def test_density_bound_reports_failed_preconditions():
    report = density_bound_check(DifferenceSet.of([2, 3, 5], 6), 2, 3)
    assert not report["preconditions_hold"]
    assert not report["holds"]
    assert "D has a clique of size k+1" in report["failures"]


def test_subset_recurrence():
    report = subset_recurrence_check(ODDS, [0, 1, 2, 3, 4, 5, 6], 2)
    assert report["clique_free"]
    assert report["blue_degree"] >= report["bound"]
    assert report["bound"] == Fraction(5, 2)
    assert report["holds"]


def test_subset_must_fit_window():
    with pytest.raises(ValidationError):
        subset_recurrence_check(ODDS, [0, 20], 2)


def test_enumeration_two_colors_window_ten(single_worker):
    result = enumerate_and_verify(2, 10)
    assert result.min_density == Fraction(1, 2)
    assert sorted(result.witness.D) == [1, 3, 5, 7, 9]
    assert result.bound_failures == 0
    data = result.to_json()
    assert data["floor"] == Fraction(3, 10)
    assert len(data["clique_certificate"]) == 2


def test_enumeration_matches_across_worker_counts(monkeypatch):
    from app.core.config import settings
    monkeypatch.setattr(settings, "workers", 2)
    parallel = enumerate_and_verify(2, 8, workers=2)
    serial = enumerate_and_verify(2, 8, workers=1)
    assert parallel.to_json() == serial.to_json()


@pytest.mark.parametrize("k, N", [(2, 16), (3, 14)])
def test_enumeration_respects_the_floor(single_worker, k, N):
    result = enumerate_and_verify(k, N)
    assert result.min_density >= result.floor
    assert result.bound_failures == 0
    assert not has_delta_clique(result.witness, k + 1)


def test_single_color_trivially_full():
    result = enumerate_and_verify(1, 6, workers=1)
    assert result.min_density == 1


def test_enumeration_window_capped():
    with pytest.raises(ValidationError):
        enumerate_and_verify(2, 10**3)


def test_rotation_density_tracks_twice_the_radius():
    report = rotation_densities(RotationModel((5 ** 0.5 - 1) / 2, 0.2), 10**5)
    assert report["density"] == pytest.approx(0.4, abs=0.01)
    assert report["k"] == 5
    assert report["holds"]


def test_rotation_model_radius_checked():
    with pytest.raises(ValidationError):
        RotationModel(0.3, 1.5)
