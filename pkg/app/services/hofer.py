"""
Hofer-geometry bounds built from radial profiles

Flat embeddings of even functions, ker-Calabi flats, sharpness of the
asymptotic-norm estimate u(r) = 1/k and the packing upper bound.
"""

import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.constants import (
    AXIOM_TOLERANCE,
    BILIPSCHITZ_GRID_SIZE,
    DEFAULT_APPROXIMANTS,
    MAX_APPROXIMANT_DENOMINATOR,
    MAX_FLAT_HALF_WIDTH,
    Z_MAX,
    Z_MIN,
)
from ..core.exceptions import NumericalError, ValidationError
from ..utils.logging_utils import get_logger
from ..utils.pool_utils import parallel_map
from ..utils.rational_utils import format_rational
from .configuration import make_config, make_levels, max_a
from .estimators import level_average, sigma_integral, zeta0
from .profiles import (
    PiecewisePolynomial,
    RadialProfile,
    as_radial,
    odd_extension,
    smoothed_indicator,
)

logger = get_logger(__name__)


def admissible_k(r: Fraction) -> int:
    """k >= 2 with 1/(k+1) < r < 1/k"""
    r = Fraction(r)
    if not 0 < r < Fraction(1, 2):
        raise ValidationError("r must lie in (0, 1/2)", {"r": format_rational(r)})
    k = math.floor(1 / r)
    if r == Fraction(1, k):
        raise ValidationError("r must not be the reciprocal of an integer", {"r": format_rational(r)})
    return k


# ============================================================================
# FLATS
# ============================================================================

def _half_width(h: RadialProfile) -> Fraction:
    support = h.support()
    if support is None:
        return Fraction(0)
    lo, hi = support
    return max(-lo, hi)


def h_sharp(h: RadialProfile, b: Fraction) -> RadialProfile:
    """
    Even, zero-mean extension of an even h supported in (-b, b)

    h# = h on (-b, b), h#(x) = -h(1/2 - x) near the north pole and
    h#(x) = -h(-1/2 - x) near the south pole, zero elsewhere.

    Raises:
        ValidationError: h is not even, b >= 1/6, or the support is too wide
    """
    b = Fraction(b)
    if not 0 < b < MAX_FLAT_HALF_WIDTH:
        raise ValidationError("b must lie in (0, 1/6)", {"b": format_rational(b)})
    if not h.is_even():
        raise ValidationError("profile must be even")
    if _half_width(h) > b:
        raise ValidationError(
            "profile support exceeds (-b, b)",
            {"b": format_rational(b), "half_width": format_rational(_half_width(h))},
        )
    if h.is_zero():
        return h
    center = as_radial(h.restrict(-b, b))
    north = as_radial(h.restrict(Fraction(0), b).pullback(Fraction(-1), Z_MAX).scale(-1))
    south = as_radial(h.restrict(-b, Fraction(0)).pullback(Fraction(-1), Z_MIN).scale(-1))
    return center + north + south


def _denominators(n: int) -> List[int]:
    top = math.log10(MAX_APPROXIMANT_DENOMINATOR)
    denominators = []
    for i in range(1, n + 1):
        d = max(2, int(round(10 ** (top * i / n))))
        denominators.append(max(d, denominators[-1] if denominators else d))
    return denominators


def flat_approximants(h: RadialProfile, b: Fraction, n: int) -> List[Fraction]:
    """Rationals x_i in (0, b) converging to the location of max h"""
    x0, _ = h.argmax()
    x0 = abs(Fraction(x0))
    points = []
    for d in _denominators(n):
        x = Fraction(1, d) if x0 == 0 else x0.limit_denominator(d)
        if 0 < x < b:
            points.append(x)
    return points


def flat_bounds(h: RadialProfile, a: Fraction,
                rational_approximants: int = DEFAULT_APPROXIMANTS) -> Dict[str, Any]:
    """
    Hofer lower bound for Phi(h) from the two-circle estimators zeta0_{2, 1/2 - x_i}

    Each x_i gives levels -x_i, x_i, where h# agrees with h, so the estimator
    returns h(x_i). The bound is the running supremum; max|h| bounds it above.

    Args:
        h: Even profile supported in (-b, b), b < 1/6
        a: Stabilisation parameter with 0 < a < 1/2 - 3b
        rational_approximants: Number of approximants x_i

    Returns:
        Report with rows {x, value}, lower bound, upper bound and gap
    """
    a = Fraction(a)
    if rational_approximants < 1:
        raise ValidationError("need at least one approximant")
    upper = h.max_abs()
    if h.is_zero():
        return {"rows": [], "lower": 0.0, "upper": 0.0, "gap": 0.0}
    b = _half_width(h)
    if not a < Fraction(1, 2) - 3 * b:
        raise ValidationError(
            "0 < a < 1/2 - 3b violated",
            {"a": format_rational(a), "b": format_rational(b)},
        )
    sharp = h_sharp(h, b)
    rows = []
    lower = -math.inf
    for x in flat_approximants(h, b, rational_approximants):
        value = zeta0(make_config(2, Fraction(1, 2) - x, a), sharp)
        lower = max(lower, float(value))
        rows.append({"x": x, "value": value, "running_bound": lower})
    if not rows:
        raise ValidationError("no admissible approximant in (0, b)")
    logger.debug(f"Flat bound {lower:.12g} against sup norm {upper:.12g} from {len(rows)} approximants")
    return {"rows": rows, "lower": lower, "upper": upper, "gap": upper - lower}


def flat_lower_bound(h: RadialProfile, a: Fraction,
                     rational_approximants: int = DEFAULT_APPROXIMANTS) -> float:
    """Lower bound for d_Hofer(Phi(h), id); never exceeds max|h|"""
    return flat_bounds(h, a, rational_approximants)["lower"]


def interval_i_k(k: int) -> Tuple[Fraction, Fraction]:
    """I_k = (-1/2 + 1/(k+1), -1/2 + 1/k)"""
    return Z_MIN + Fraction(1, k + 1), Z_MIN + Fraction(1, k)


def upsilon_profile(k: int, h_left: PiecewisePolynomial) -> RadialProfile:
    """Odd extension about the midpoint of I_k of a profile on the left half of I_k"""
    lo, hi = interval_i_k(k)
    middle = (lo + hi) / 2
    d_lo, d_hi = h_left.domain
    if d_lo < lo or d_hi > middle:
        raise ValidationError("profile must live on the left half of I_k", {"k": k})
    return odd_extension(h_left, middle)


def phi_k_flat(k: int, B: Fraction, h: RadialProfile) -> Dict[str, Any]:
    """
    Estimator lower bound and Calabi value for H = k * h o z

    Only the lowest level -1/2 + B lies in I_k, so the homogenised value
    sum_j h(z_j) equals h(-1/2 + B).

    Raises:
        ValidationError: k < 2, B outside (1/(k+1), 1/k), h not supported in
            I_k or not zero-mean
    """
    B = Fraction(B)
    if k < 2:
        raise ValidationError("k must be at least 2", {"k": k})
    if not Fraction(1, k + 1) < B < Fraction(1, k):
        raise ValidationError("B must lie in (1/(k+1), 1/k)", {"k": k, "B": format_rational(B)})
    lo, hi = interval_i_k(k)
    support = h.support()
    if support is not None and (support[0] < lo or support[1] > hi):
        raise ValidationError("profile must be supported in I_k", {"k": k})
    mean = h.calabi()
    if abs(float(mean)) > AXIOM_TOLERANCE:
        raise ValidationError("profile must have zero mean", {"mean": float(mean)})
    measure = make_levels(k, B)
    inside = [z for z in measure.atoms if lo < z < hi]
    return {
        "k": k,
        "B": B,
        "lower": k * level_average(measure, h),
        "calabi": k * mean,
        "levels_in_I_k": len(inside),
    }


# ============================================================================
# ASYMPTOTIC NORM AND PACKING
# ============================================================================

def h_r_delta(r: Fraction, delta: Fraction) -> RadialProfile:
    """
    Smoothed indicator equal to 1 on the circle z = -1/2 + r, odd about -1/2 + r + 2 delta

    Raises:
        ValidationError: r not strictly between 1/(k+1) and 1/k, or the support
            [-1/2 + r - delta, -1/2 + r + 5 delta] leaves (-1/2, 1/2)
    """
    admissible_k(r)
    return smoothed_indicator(r, delta)


def sikorav_upper(l: int, support_area: Fraction) -> Fraction:
    """Asymptotic-norm bound 1/l from an l-packing of the support"""
    support_area = Fraction(support_area)
    if l < 1:
        raise ValidationError("packing size must be at least 1", {"l": l})
    if support_area < 0 or l * support_area > 1:
        raise ValidationError(
            "packing obstructed by area",
            {"l": l, "support_area": format_rational(support_area)},
        )
    return Fraction(1, l)


def packing_number_bound(r: Fraction, a: Fraction) -> int:
    """
    Largest l for which Lambda_r x S admits an l-packing in M_a: k = floor(1/r)

    Raises:
        ValidationError: a violates a < B - C for B = r
    """
    k = admissible_k(r)
    make_config(k, Fraction(r), Fraction(a))
    return k


def u_r(r: Fraction, delta: Fraction, a: Optional[Fraction] = None) -> Dict[str, Any]:
    """
    Both sides of u(r) for h_{r,delta}: sigma_{B,C} integral below, 1/k above

    Args:
        r: Area below the circle K_r
        delta: Smoothing width; 5 delta must stay below C
        a: Stabilisation parameter (default half the admissible supremum)

    Returns:
        {r, delta, k, lower, upper, sharp}
    """
    r, delta = Fraction(r), Fraction(delta)
    k = admissible_k(r)
    C = (1 - 2 * r) / (k - 1)
    if not 5 * delta < C:
        raise ValidationError(
            "delta too large: levels meet the negative bump",
            {"delta": format_rational(delta), "C": format_rational(C)},
        )
    a = max_a(k, r) / 2 if a is None else Fraction(a)
    h = h_r_delta(r, delta)
    lower = sigma_integral(make_config(k, r, a), h)
    support = h.support()
    upper = sikorav_upper(packing_number_bound(r, a), support[1] - support[0])
    return {"r": r, "delta": delta, "k": k, "lower": lower, "upper": upper, "sharp": lower == upper}


def stabilized_u(r: Fraction, delta: Fraction, a: Fraction) -> Tuple[Fraction, Fraction, int]:
    """u_K(r) for the stabilised Hamiltonian h_{r,delta} f_W; needs B > C + a"""
    report = u_r(r, delta, a)
    return report["lower"], report["upper"], report["k"]


def _u_r_job(job: Tuple[Fraction, Fraction]) -> Dict[str, Any]:
    return u_r(*job)


def u_r_grid(rs: Sequence[Fraction], delta: Fraction, workers: Optional[int] = None) -> List[Dict[str, Any]]:
    """u_r over a grid of r, in input order"""
    rows = parallel_map(_u_r_job, [(Fraction(r), Fraction(delta)) for r in rs], workers)
    logger.info(f"u(r) on {len(rows)} radii: {sum(row['sharp'] for row in rows)} sharp")
    return rows


# ============================================================================
# BI-LIPSCHITZ CONSTANT
# ============================================================================

def verify_bilipschitz(rho_g: float, d_g: float, grid_size: int = BILIPSCHITZ_GRID_SIZE) -> Dict[str, Any]:
    """min over n = 0..grid_size of max(1 - n d, n rho) against rho/(rho + d)"""
    if rho_g <= 0 or d_g <= 0:
        raise ValidationError("rho(g) and d_Hofer(g, id) must be positive", {"rho_g": rho_g, "d_g": d_g})
    constant = rho_g / (rho_g + d_g)
    n = np.arange(grid_size + 1, dtype=float)
    grid_min = float(np.min(np.maximum(1 - n * d_g, n * rho_g)))
    return {
        "rho_g": rho_g,
        "d_g": d_g,
        "constant": constant,
        "grid_min": grid_min,
        "verified": grid_min >= constant - 1e-12,
    }


def bilipschitz_constant(rho_g: float, d_g: float) -> float:
    """
    C_2 = rho(g) / (rho(g) + d_Hofer(g, id)), checked against the integer optimisation

    Raises:
        ValidationError: non-positive inputs
        NumericalError: the grid minimum falls below C_2
    """
    report = verify_bilipschitz(rho_g, d_g)
    if not report["verified"]:
        raise NumericalError("integer optimisation falls below C_2", report)
    return report["constant"]
