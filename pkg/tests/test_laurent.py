import math
from fractions import Fraction

import numpy as np
import pytest

from app.core.exceptions import ValidationError
from app.services.laurent import (
    LaurentPoly,
    derivative,
    evaluate,
    grad,
    log_derivative,
    min_coefficient_order,
    numeric_arrays,
    q_index,
    variable_names,
)
from app.services.novikov import constant, monomial, ns_equal_mod


def p0_plus_inverse_q0():
    """T^1/10 (p0 + q0^-1) in two variables"""
    coefficient = monomial(1, Fraction(1, 10))
    return LaurentPoly.monomial(2, {0: 1}, coefficient) + LaurentPoly.monomial(2, {1: -1}, coefficient)


def test_variable_layout():
    assert variable_names(2) == ["p0", "p1", "q0", "q1"]
    assert q_index(3, 1) == 4


def test_like_monomials_merge():
    poly = p0_plus_inverse_q0() + p0_plus_inverse_q0()
    assert len(poly.terms) == 2
    assert poly.coefficient((1, 0)).coefficient(Fraction(1, 10)) == pytest.approx(2)


def test_subtraction_cancels():
    assert (p0_plus_inverse_q0() - p0_plus_inverse_q0()).is_zero()


def test_product_adds_exponents():
    x = LaurentPoly.monomial(2, {0: 1}, constant(1))
    inverse = LaurentPoly.monomial(2, {0: -1}, constant(1))
    product = x * inverse
    assert product.terms[0][0] == (0, 0)


def test_mismatched_variable_sets():
    with pytest.raises(ValidationError):
        LaurentPoly.zero(2) + LaurentPoly.zero(4)


def test_derivative_lowers_power():
    poly = LaurentPoly.monomial(2, {1: -2}, constant(3))
    d = derivative(poly, 1)
    assert d.terms[0][0] == (0, -3)
    assert d.terms[0][1].coefficient(Fraction(0)) == pytest.approx(-6)


def test_log_derivative_scales_by_power():
    poly = LaurentPoly.monomial(2, {0: 2, 1: -1}, constant(1))
    assert log_derivative(poly, 0).terms[0][1].coefficient(Fraction(0)) == pytest.approx(2)
    assert log_derivative(poly, 1).terms[0][1].coefficient(Fraction(0)) == pytest.approx(-1)


def test_grad_has_one_entry_per_variable():
    assert len(grad(p0_plus_inverse_q0())) == 2


def test_evaluate_with_negative_powers():
    point = [constant(2), constant(4)]
    value = evaluate(p0_plus_inverse_q0(), point, math.inf)
    assert ns_equal_mod(value, monomial(2.25, Fraction(1, 10)), math.inf)


def test_evaluate_checks_dimension():
    with pytest.raises(ValidationError):
        evaluate(p0_plus_inverse_q0(), [constant(1)], math.inf)


def test_numeric_arrays_match_evaluation():
    exponents, coefficients = numeric_arrays(p0_plus_inverse_q0(), 0.5)
    z = np.array([2.0, 4.0])
    value = np.sum(coefficients * np.prod(z ** exponents, axis=1))
    assert value == pytest.approx(2.25 * 0.5 ** 0.1)


def test_min_coefficient_order():
    assert min_coefficient_order(p0_plus_inverse_q0()) == math.inf
    truncated = LaurentPoly.monomial(2, {0: 1}, monomial(1, Fraction(1, 10), Fraction(1)))
    assert min_coefficient_order(truncated) == 1


def test_describe_names_variables():
    text = p0_plus_inverse_q0().describe(["p0", "q0"])
    assert "p0" in text and "q0^-1" in text
