"""
Laurent polynomials in p_0..p_{k-1}, q_0..q_{k-1} with Novikov coefficients

Variables are indexed 0..2k-1 with p_i at index i and q_i at index k+i.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import ValidationError
from ..utils.rational_utils import Order, format_rational
from .novikov import (
    NovikovScalar,
    ns_add,
    ns_evaluate,
    ns_mul,
    ns_pow,
    ns_scale,
    ns_shift,
    truncate,
)

Monomial = Tuple[int, ...]


def variable_names(k: int) -> List[str]:
    """["p0", ..., "p{k-1}", "q0", ..., "q{k-1}"]"""
    return [f"p{i}" for i in range(k)] + [f"q{i}" for i in range(k)]


def q_index(k: int, i: int) -> int:
    """Variable index of q_i"""
    return k + i


@dataclass(frozen=True)
class LaurentPoly:
    """Sparse Laurent polynomial; terms sorted by monomial, no zero coefficients"""
    n_vars: int
    terms: Tuple[Tuple[Monomial, NovikovScalar], ...] = ()

    def __post_init__(self):
        for monomial, coefficient in self.terms:
            if len(monomial) != self.n_vars:
                raise ValidationError(
                    "monomial length does not match the variable count",
                    {"expected": self.n_vars, "got": len(monomial)},
                )
            if coefficient.is_zero():
                raise ValidationError("zero coefficients are not stored")

    @classmethod
    def from_terms(cls, n_vars: int,
                   terms: Iterable[Tuple[Sequence[int], NovikovScalar]]) -> "LaurentPoly":
        """Merge like monomials and drop vanishing coefficients"""
        merged: Dict[Monomial, NovikovScalar] = {}
        for monomial, coefficient in terms:
            key = tuple(int(e) for e in monomial)
            merged[key] = ns_add(merged[key], coefficient) if key in merged else coefficient
        kept = tuple((m, merged[m]) for m in sorted(merged) if not merged[m].is_zero())
        return cls(n_vars, kept)

    @classmethod
    def zero(cls, n_vars: int) -> "LaurentPoly":
        return cls(n_vars)

    @classmethod
    def monomial(cls, n_vars: int, exponents: Mapping[int, int], coefficient: NovikovScalar) -> "LaurentPoly":
        """Single term, exponents given as {variable index: power}"""
        monomial = [0] * n_vars
        for index, power in exponents.items():
            monomial[index] += power
        return cls.from_terms(n_vars, [(monomial, coefficient)])

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_compatible(other)
        return LaurentPoly.from_terms(self.n_vars, list(self.terms) + list(other.terms))

    def __neg__(self) -> "LaurentPoly":
        return self.scale(-1)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_compatible(other)
        products = []
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                products.append((tuple(a + b for a, b in zip(m1, m2)), ns_mul(c1, c2)))
        return LaurentPoly.from_terms(self.n_vars, products)

    def scale(self, factor) -> "LaurentPoly":
        """Multiply by a NovikovScalar or a complex number"""
        if isinstance(factor, NovikovScalar):
            return LaurentPoly.from_terms(self.n_vars, [(m, ns_mul(c, factor)) for m, c in self.terms])
        return LaurentPoly.from_terms(self.n_vars, [(m, ns_scale(c, factor)) for m, c in self.terms])

    def shift(self, exponent: Fraction) -> "LaurentPoly":
        """Multiply every coefficient by T^exponent"""
        return LaurentPoly(self.n_vars, tuple((m, ns_shift(c, exponent)) for m, c in self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, monomial: Sequence[int]) -> NovikovScalar:
        key = tuple(monomial)
        for m, c in self.terms:
            if m == key:
                return c
        return NovikovScalar()

    def exponents(self) -> List[Fraction]:
        """Sorted T-exponents occurring in any coefficient"""
        return sorted({e for _, c in self.terms for e, _ in c.terms})

    def _check_compatible(self, other: "LaurentPoly"):
        if self.n_vars != other.n_vars:
            raise ValidationError("Laurent polynomials live in different variable sets")

    def describe(self, names: Sequence[str]) -> str:
        """Human readable form, e.g. (1)T^1/10*q0^-1 + ..."""
        if not self.terms:
            return "0"
        parts = []
        for monomial, coefficient in self.terms:
            factors = [
                names[i] if e == 1 else f"{names[i]}^{e}"
                for i, e in enumerate(monomial) if e != 0
            ]
            coefficient_text = " + ".join(
                f"({c.real:.6g}{c.imag:+.6g}j)T^{format_rational(x)}" for x, c in coefficient.terms
            )
            parts.append("[" + coefficient_text + "]" + ("*" + "*".join(factors) if factors else ""))
        return " + ".join(parts)


def derivative(poly: LaurentPoly, index: int) -> LaurentPoly:
    """Formal partial derivative in variable `index`"""
    terms = []
    for monomial, coefficient in poly.terms:
        power = monomial[index]
        if power == 0:
            continue
        lowered = list(monomial)
        lowered[index] -= 1
        terms.append((lowered, ns_scale(coefficient, power)))
    return LaurentPoly.from_terms(poly.n_vars, terms)


def log_derivative(poly: LaurentPoly, index: int) -> LaurentPoly:
    """z_index * d/dz_index: scales each term by its exponent in that variable"""
    terms = [
        (monomial, ns_scale(coefficient, monomial[index]))
        for monomial, coefficient in poly.terms
        if monomial[index] != 0
    ]
    return LaurentPoly.from_terms(poly.n_vars, terms)


def grad(poly: LaurentPoly) -> List[LaurentPoly]:
    """All 2k partial derivatives, in variable order"""
    return [derivative(poly, i) for i in range(poly.n_vars)]


def evaluate(poly: LaurentPoly, point: Sequence[NovikovScalar], order: Order,
             inverses: Optional[Sequence[NovikovScalar]] = None,
             cache: Optional[Dict[Tuple[int, int], NovikovScalar]] = None) -> NovikovScalar:
    """
    Substitute Novikov values for the variables, modulo T^order

    Negative powers go through ns_invert at the working order, so every
    variable must be a unit at the requested precision. Callers that already
    know the inverses can pass them, and a shared power cache can be reused
    across polynomials evaluated at the same point.

    Args:
        poly: Polynomial to evaluate
        point: One NovikovScalar per variable
        order: Working truncation order
        inverses: Optional precomputed 1/z per variable
        cache: Optional power cache keyed by (variable, power)

    Returns:
        Value known modulo T^order (or less when inputs are coarser)
    """
    if len(point) != poly.n_vars:
        raise ValidationError("point dimension does not match the variable count",
                              {"expected": poly.n_vars, "got": len(point)})
    powers = cache if cache is not None else {}
    total = truncate(NovikovScalar(), order)
    for monomial, coefficient in poly.terms:
        value = coefficient
        for index, power in enumerate(monomial):
            if power == 0:
                continue
            key = (index, power)
            if key not in powers:
                if power < 0 and inverses is not None:
                    powers[key] = ns_pow(inverses[index], -power, order)
                else:
                    powers[key] = ns_pow(point[index], power, order)
            value = truncate(ns_mul(value, powers[key]), order)
        total = ns_add(total, value)
    return total


def numeric_arrays(poly: LaurentPoly, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Exponent matrix and coefficient values at T = t

    Returns:
        (E, c) with E of shape (terms, variables) and c complex of shape (terms,)
    """
    if not poly.terms:
        return np.zeros((0, poly.n_vars), dtype=float), np.zeros(0, dtype=complex)
    exponents = np.array([m for m, _ in poly.terms], dtype=float)
    coefficients = np.array([ns_evaluate(c, t) for _, c in poly.terms], dtype=complex)
    return exponents, coefficients


def min_coefficient_order(poly: LaurentPoly) -> Order:
    """Smallest truncation order among the coefficients (math.inf when exact)"""
    return min((c.order for _, c in poly.terms), default=math.inf)
