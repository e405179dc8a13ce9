from fractions import Fraction

import pytest

from app.core.exceptions import ValidationError
from app.services.configuration import make_config
from app.services.estimators import (
    axiom_suite,
    c0_timedep,
    calabi_limit,
    calabi_radial,
    direct_zeta0,
    estimator_sweep,
    evaluate_estimator,
    mu0,
    profile_from_primitive,
    sigma_integral,
    tau,
    zeta0,
)
from app.services.profiles import PiecewisePolynomial, TimeDepRadial, bump, poly, time_poly

Z_SQUARED = poly([0, 0, 1])
POSITIVE_PART = poly([0, 1], Fraction(0), Fraction(1, 2))


def test_zeta0_of_z_squared(two_circle_config):
    assert zeta0(two_circle_config, Z_SQUARED) == Fraction(1, 100)


def test_homogenised_value_agrees(two_circle_config):
    assert mu0(two_circle_config, Z_SQUARED) == zeta0(two_circle_config, Z_SQUARED)


def test_time_dependent_estimator_integrates_time(two_circle_config):
    H = TimeDepRadial(((time_poly([0, 1]), Z_SQUARED),))
    assert c0_timedep(two_circle_config, H) == Fraction(1, 200)


def test_tau_of_positive_part():
    assert tau(2, Fraction(2, 5), 1, Fraction(1, 2), POSITIVE_PART) == Fraction(1, 20)


def test_tau_vanishes_between_equal_configurations():
    assert tau(3, Fraction(3, 10), 3, Fraction(3, 10), Z_SQUARED) == 0


def test_evaluate_estimator_dispatch(two_circle_config):
    assert evaluate_estimator("zeta0", two_circle_config, Z_SQUARED).value == Fraction(1, 100)
    assert evaluate_estimator("c0", two_circle_config, Z_SQUARED).value == Fraction(1, 100)
    assert evaluate_estimator("tau", two_circle_config, POSITIVE_PART).value == Fraction(1, 20)
    with pytest.raises(ValidationError):
        evaluate_estimator("gamma", two_circle_config, Z_SQUARED)


def test_estimator_value_json(two_circle_config):
    data = evaluate_estimator("zeta0", two_circle_config, Z_SQUARED).to_json()
    assert data["config"]["B"] == "2/5"
    assert data["value"] == Fraction(1, 100)


def test_normalization_by_constants(three_circle_config):
    assert zeta0(three_circle_config, Z_SQUARED.shift(Fraction(3))) == zeta0(three_circle_config, Z_SQUARED) + 3


def test_float_cross_check(three_circle_config):
    h = bump(Fraction(0), Fraction(1, 4), Fraction(1))
    assert direct_zeta0(3, Fraction(3, 10), h) == pytest.approx(float(zeta0(three_circle_config, h)), abs=1e-12)


def test_profile_from_primitive():
    # rho(s) = (1/2 - s)^2 / 2 on [0, 1/2], so h(s) = s on (0, 1/2]
    rho = PiecewisePolynomial.from_absolute((Fraction(0), Fraction(1, 2)), ([Fraction(1, 8), Fraction(-1, 2), Fraction(1, 2)],))
    h = profile_from_primitive(rho)
    assert h(Fraction(1, 5)) == Fraction(1, 5)
    assert h(Fraction(-1, 5)) == 0


def test_sweep_skips_invalid_pairs(single_worker):
    rows = estimator_sweep("zeta0", [2, 3], [Fraction(1, 4), Fraction(2, 5)], Z_SQUARED)
    assert [(row["k"], row["B"]) for row in rows] == [(2, Fraction(2, 5)), (3, Fraction(2, 5))]
    assert rows[0]["value"] == Fraction(1, 100)


def test_calabi_limit_picks_the_riemann_value():
    report = calabi_limit(Fraction(2, 5), POSITIVE_PART, 400)
    assert report["limit"] == pytest.approx(0.025, abs=1e-9)
    assert report["candidates"] == {"literal": Fraction(1, 200), "riemann": Fraction(1, 40)}
    assert report["matches"] == ["riemann"]
    assert report["lipschitz_bound_holds"]
    assert report["table"][0]["k"] == 2


def test_calabi_limit_preconditions():
    with pytest.raises(ValidationError):
        calabi_limit(Fraction(2, 5), Z_SQUARED, 400)
    with pytest.raises(ValidationError):
        calabi_limit(Fraction(2, 5), POSITIVE_PART, 4)
    with pytest.raises(ValidationError):
        calabi_limit(Fraction(1, 2), POSITIVE_PART, 400)


def test_axiom_suite_passes_on_random_profiles(three_circle_config):
    report = axiom_suite(three_circle_config, seed=7, n_samples=200)
    failed = [name for name, check in report["checks"].items() if not check["passed"]]
    assert failed == []
    assert report["quasi_state_counterexample"]["value"] == Fraction(1, 3)
    assert report["passed"]


def test_axiom_suite_is_reproducible(two_circle_config):
    first = axiom_suite(two_circle_config, seed=3, n_samples=5)
    second = axiom_suite(two_circle_config, seed=3, n_samples=5)
    assert first == second


def test_axiom_suite_on_equator():
    c = make_config(1, Fraction(1, 2), Fraction(1, 4))
    report = axiom_suite(c, seed=0, n_samples=10)
    assert report["quasi_state_counterexample"]["expected"] == 1
    assert report["passed"]


def test_sigma_integral_and_calabi(two_circle_config):
    assert sigma_integral(two_circle_config, Z_SQUARED) == Fraction(1, 100)
    assert calabi_radial(Z_SQUARED) == Fraction(1, 12)
    assert calabi_radial(POSITIVE_PART) == Fraction(1, 8)
