from fractions import Fraction

import pytest

from app.core.exceptions import ValidationError
from app.services.hofer import (
    admissible_k,
    bilipschitz_constant,
    flat_approximants,
    flat_bounds,
    flat_lower_bound,
    h_sharp,
    h_r_delta,
    interval_i_k,
    packing_number_bound,
    phi_k_flat,
    sikorav_upper,
    stabilized_u,
    u_r,
    u_r_grid,
    upsilon_profile,
    verify_bilipschitz,
)
from app.services.profiles import bump, poly, smoothed_indicator

EVEN_BUMP = bump(Fraction(0), Fraction(1, 10), Fraction(1))


# ============================================================================
# FLATS
# ============================================================================

def test_h_sharp_has_zero_mean_and_agrees_near_the_equator():
    sharp = h_sharp(EVEN_BUMP, Fraction(1, 10))
    assert sharp.calabi() == 0
    assert sharp(Fraction(1, 20)) == EVEN_BUMP(Fraction(1, 20))
    assert sharp(Fraction(1, 2)) == -EVEN_BUMP(Fraction(0))
    assert sharp.is_even()


def test_h_sharp_preconditions():
    with pytest.raises(ValidationError):
        h_sharp(EVEN_BUMP, Fraction(1, 5))
    with pytest.raises(ValidationError):
        h_sharp(bump(Fraction(1, 20), Fraction(1, 20), 1), Fraction(1, 10))
    with pytest.raises(ValidationError):
        h_sharp(EVEN_BUMP, Fraction(1, 20))


def test_flat_bound_never_exceeds_sup_norm():
    report = flat_bounds(EVEN_BUMP, Fraction(1, 10), 8)
    assert report["upper"] == pytest.approx(1.0)
    assert report["lower"] <= report["upper"] + 1e-12
    assert report["gap"] >= -1e-12
    running = [row["running_bound"] for row in report["rows"]]
    assert running == sorted(running)


def test_flat_bound_reaches_the_rational_maximum():
    # the maximum sits at 0, so approximants 1/d approach it from the right
    report = flat_bounds(EVEN_BUMP, Fraction(1, 10), 12)
    assert report["gap"] < 1e-5
    assert flat_lower_bound(EVEN_BUMP, Fraction(1, 10), 12) == report["lower"]


def test_flat_bound_requires_small_stabilisation():
    with pytest.raises(ValidationError):
        flat_bounds(EVEN_BUMP, Fraction(1, 4))


def test_zero_profile_has_zero_bounds():
    assert flat_bounds(poly([0]), Fraction(1, 10)) == {"rows": [], "lower": 0.0, "upper": 0.0, "gap": 0.0}


def test_flat_approximants_stay_inside():
    points = flat_approximants(EVEN_BUMP, Fraction(1, 10), 12)
    assert points
    assert all(0 < x < Fraction(1, 10) for x in points)


def test_interval_i_k():
    assert interval_i_k(2) == (Fraction(-1, 6), Fraction(0))


def test_phi_k_flat_sees_only_the_lowest_level():
    k, B = 2, Fraction(2, 5)
    lo, hi = interval_i_k(k)
    middle = (lo + hi) / 2
    left = bump((lo + middle) / 2, (middle - lo) / 4, 1)
    h = upsilon_profile(k, left.restrict(lo, middle))
    report = phi_k_flat(k, B, h)
    assert report["calabi"] == 0
    assert report["levels_in_I_k"] == 1
    assert report["lower"] == h(Fraction(-1, 2) + B)


def test_phi_k_flat_preconditions():
    with pytest.raises(ValidationError):
        phi_k_flat(2, Fraction(3, 10), poly([0]))
    with pytest.raises(ValidationError):
        phi_k_flat(2, Fraction(2, 5), EVEN_BUMP)


# ============================================================================
# ASYMPTOTIC NORM AND PACKING
# ============================================================================

def test_admissible_k():
    assert admissible_k(Fraction(3, 10)) == 3
    assert admissible_k(Fraction(2, 5)) == 2
    with pytest.raises(ValidationError):
        admissible_k(Fraction(1, 3))


def test_u_r_three_circles():
    report = u_r(Fraction(3, 10), Fraction(1, 100))
    assert report["k"] == 3
    assert report["lower"] == Fraction(1, 3)
    assert report["upper"] == Fraction(1, 3)
    assert report["sharp"]


def test_u_r_two_circles():
    report = u_r(Fraction(2, 5), Fraction(1, 100))
    assert report["k"] == 2
    assert report["lower"] == report["upper"] == Fraction(1, 2)


def test_h_r_delta_needs_a_non_reciprocal_radius():
    assert h_r_delta(Fraction(3, 10), Fraction(1, 100)) == smoothed_indicator(Fraction(3, 10), Fraction(1, 100))
    with pytest.raises(ValidationError):
        h_r_delta(Fraction(1, 3), Fraction(1, 100))


def test_u_r_rejects_wide_smoothing():
    with pytest.raises(ValidationError):
        u_r(Fraction(3, 10), Fraction(1, 20))


def test_u_r_grid_is_sharp_everywhere(single_worker):
    rs = [Fraction(7, 20), Fraction(9, 20), Fraction(13, 40)]
    rows = u_r_grid(rs, Fraction(1, 1000))
    assert [row["r"] for row in rows] == rs
    assert all(row["sharp"] for row in rows)


def test_stabilized_u():
    lower, upper, k = stabilized_u(Fraction(3, 10), Fraction(1, 100), Fraction(1, 20))
    assert (lower, upper, k) == (Fraction(1, 3), Fraction(1, 3), 3)


def test_sikorav_upper():
    assert sikorav_upper(3, Fraction(6, 100)) == Fraction(1, 3)
    with pytest.raises(ValidationError):
        sikorav_upper(20, Fraction(6, 100))


def test_packing_number_bound():
    assert packing_number_bound(Fraction(3, 10), Fraction(1, 20)) == 3
    with pytest.raises(ValidationError):
        packing_number_bound(Fraction(3, 10), Fraction(1, 5))


# ============================================================================
# BI-LIPSCHITZ CONSTANT
# ============================================================================

def test_bilipschitz_constant():
    assert bilipschitz_constant(1, 1) == pytest.approx(0.5)
    assert bilipschitz_constant(1 / 3, 2) == pytest.approx(1 / 7)


def test_bilipschitz_grid_dominates_constant():
    for rho_g, d_g in [(0.3, 0.7), (2.0, 0.01), (0.05, 5.0)]:
        assert verify_bilipschitz(rho_g, d_g)["verified"]


def test_bilipschitz_rejects_non_positive():
    with pytest.raises(ValidationError):
        verify_bilipschitz(0, 1)

def _lowest_level_flat(k):
    lo, hi = interval_i_k(k)
    quarter = (hi - lo) / 4
    B = Fraction(1, k + 1) + quarter
    peak = bump(lo + quarter, quarter / 2, 1)
    return B, upsilon_profile(k, peak.restrict(lo, lo + 2 * quarter))


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_phi_k_flat_lower_bound_is_the_peak(k):
    B, h = _lowest_level_flat(k)
    report = phi_k_flat(k, B, h)
    assert report["calabi"] == 0
    assert report["lower"] == h.argmax()[1] == 1


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_phi_k_flat_ignores_perturbations_away_from_the_levels(k, rng):
    B, h = _lowest_level_flat(k)
    lo, hi = interval_i_k(k)
    middle = (lo + hi) / 2
    width = (hi - lo) / 16
    baseline = phi_k_flat(k, B, h)["lower"]
    for _ in range(25):
        height = Fraction(rng.randint(1, 20), 10) * rng.choice([-1, 1])
        g = upsilon_profile(k, bump(middle - width, width, height).restrict(lo, middle))
        assert phi_k_flat(k, B, h + g)["lower"] == baseline
