"""
Truncated Novikov-field arithmetic

Elements are finite sums  sum_j a_j T^{e_j}  with exact rational exponents,
complex floating-point coefficients and an explicit truncation order: a value
is only known modulo T^{order}. All operations propagate the tightest order
that is still sound, and equality is only ever asserted modulo a stated order.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Tuple, Union

from ..core.config import settings
from ..core.exceptions import NotInLambdaZeroError, NotInvertibleError, ValidationError
from ..utils.rational_utils import Order, format_order, format_rational, parse_order, parse_rational

Term = Tuple[Fraction, complex]
Scalar = Union[int, float, complex, Fraction]


def _lower_bound(x: "NovikovScalar") -> Order:
    """Valuation lower bound that stays sound for truncated zero values"""
    return min(ns_val(x), x.order)


@dataclass(frozen=True)
class NovikovScalar:
    """Finite truncated element of the Novikov field"""
    terms: Tuple[Term, ...] = ()
    order: Order = math.inf

    def __post_init__(self):
        previous = None
        for exponent, coefficient in self.terms:
            if not isinstance(exponent, Fraction):
                raise ValidationError("exponents must be exact rationals", {"exponent": repr(exponent)})
            if previous is not None and exponent <= previous:
                raise ValidationError("exponents must be strictly increasing")
            if abs(coefficient) <= settings.zero_tolerance:
                raise ValidationError("stored coefficients must be non-zero")
            if exponent >= self.order:
                raise ValidationError("stored exponents must lie below the truncation order")
            previous = exponent

    @classmethod
    def from_terms(cls, terms: Union[Mapping[Fraction, Scalar], Iterable[Tuple[Any, Scalar]]],
                   order: Order = math.inf) -> "NovikovScalar":
        """
        Build a normalised scalar: like exponents merged, terms at or beyond
        the order dropped, coefficients below the zero tolerance pruned

        Args:
            terms: Mapping or pairs of (exponent, coefficient)
            order: Truncation order (math.inf for exact values)

        Returns:
            NovikovScalar
        """
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        merged: Dict[Fraction, complex] = {}
        for exponent, coefficient in pairs:
            exponent = Fraction(exponent)
            if exponent >= order:
                continue
            merged[exponent] = merged.get(exponent, 0j) + complex(coefficient)
        kept = tuple(
            (exponent, merged[exponent])
            for exponent in sorted(merged)
            if abs(merged[exponent]) > settings.zero_tolerance
        )
        return cls(kept, order)

    # Operator sugar delegating to the ns_* functions
    def __add__(self, other: Any) -> "NovikovScalar":
        return ns_add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self) -> "NovikovScalar":
        return ns_scale(self, -1)

    def __sub__(self, other: Any) -> "NovikovScalar":
        return ns_add(self, -_coerce(other))

    def __rsub__(self, other: Any) -> "NovikovScalar":
        return ns_add(_coerce(other), -self)

    def __mul__(self, other: Any) -> "NovikovScalar":
        if isinstance(other, NovikovScalar):
            return ns_mul(self, other)
        return ns_scale(self, other)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        """True when no term is stored (the value is 0 modulo T^order)"""
        return not self.terms

    def coefficient(self, exponent: Fraction) -> complex:
        """Coefficient of T^exponent (0 when absent)"""
        for e, c in self.terms:
            if e == exponent:
                return c
            if e > exponent:
                break
        return 0j

    def __repr__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            body = " + ".join(f"({c:.6g})T^{format_rational(e)}" for e, c in self.terms)
        return f"NovikovScalar({body} mod T^{format_order(self.order)})"


ZERO = NovikovScalar()
ONE = NovikovScalar(((Fraction(0), 1 + 0j),))


def constant(value: Scalar, order: Order = math.inf) -> NovikovScalar:
    """Constant scalar value * T^0"""
    return NovikovScalar.from_terms([(Fraction(0), value)], order)


def monomial(value: Scalar, exponent: Fraction, order: Order = math.inf) -> NovikovScalar:
    """Single term value * T^exponent"""
    return NovikovScalar.from_terms([(Fraction(exponent), value)], order)


def _coerce(value: Any) -> NovikovScalar:
    if isinstance(value, NovikovScalar):
        return value
    if isinstance(value, (int, float, complex, Fraction)):
        return constant(complex(value))
    raise TypeError(f"cannot combine NovikovScalar with {type(value).__name__}")


def truncate(x: NovikovScalar, order: Order) -> NovikovScalar:
    """Reduce x modulo T^order"""
    new_order = min(x.order, order)
    if new_order == x.order:
        return x
    return NovikovScalar(tuple((e, c) for e, c in x.terms if e < new_order), new_order)


def ns_val(x: NovikovScalar) -> Order:
    """
    Non-Archimedean valuation: smallest exponent with non-zero coefficient

    Returns:
        Fraction, or math.inf for zero
    """
    return x.terms[0][0] if x.terms else math.inf


def ns_add(x: NovikovScalar, y: NovikovScalar) -> NovikovScalar:
    """Sum, known modulo the smaller of the two orders"""
    return NovikovScalar.from_terms(list(x.terms) + list(y.terms), min(x.order, y.order))


def ns_scale(x: NovikovScalar, factor: Scalar) -> NovikovScalar:
    """Multiply every coefficient by a complex number"""
    factor = complex(factor)
    if factor == 0:
        return NovikovScalar((), x.order)
    return NovikovScalar.from_terms([(e, c * factor) for e, c in x.terms], x.order)


def ns_shift(x: NovikovScalar, exponent: Fraction) -> NovikovScalar:
    """Multiply by T^exponent"""
    exponent = Fraction(exponent)
    return NovikovScalar(tuple((e + exponent, c) for e, c in x.terms), x.order + exponent)


def ns_mul(x: NovikovScalar, y: NovikovScalar) -> NovikovScalar:
    """
    Product by term convolution

    The order is min(order_x + v(y), order_y + v(x)), where v is the
    valuation, bounded by the order for values that are zero mod T^order.
    """
    order = min(x.order + _lower_bound(y), y.order + _lower_bound(x))
    products: Dict[Fraction, complex] = {}
    for ex, cx in x.terms:
        for ey, cy in y.terms:
            exponent = ex + ey
            if exponent >= order:
                break
            products[exponent] = products.get(exponent, 0j) + cx * cy
    return NovikovScalar.from_terms(products, order)


def ns_invert(x: NovikovScalar, order: Order) -> NovikovScalar:
    """
    Inverse modulo T^order: returns y with x*y = 1 mod T^order

    Factors x = c T^v (1 + u) with v(u) > 0 and expands the geometric series.

    Raises:
        NotInvertibleError: x is zero
    """
    valuation = ns_val(x)
    if valuation == math.inf:
        raise NotInvertibleError("not invertible", {"value": repr(x)})
    lead = x.terms[0][1]
    normalised = ns_shift(ns_scale(x, 1 / lead), -valuation)
    u = ns_add(normalised, constant(-1))
    target = min(order, normalised.order)
    if target == math.inf and not u.is_zero():
        raise ValidationError("an untruncated inverse needs a monomial input", {"value": repr(x)})

    series = truncate(ONE, target)
    power = truncate(ONE, target)
    minus_u = ns_scale(u, -1)
    while not power.is_zero():
        power = truncate(ns_mul(power, minus_u), target)
        series = ns_add(series, power)
    return ns_shift(ns_scale(series, 1 / lead), -valuation)


def ns_pow(x: NovikovScalar, n: int, order: Order) -> NovikovScalar:
    """Integer power modulo T^order; negative powers go through ns_invert"""
    if n < 0:
        return ns_pow(ns_invert(x, order), -n, order)
    result = truncate(ONE, order)
    base = x
    while n:
        if n & 1:
            result = truncate(ns_mul(result, base), order)
        n >>= 1
        if n:
            base = truncate(ns_mul(base, base), order)
    return result


def ns_exp(x: NovikovScalar, order: Order) -> NovikovScalar:
    """
    Exponential of an element of Lambda_0 modulo T^order

    exp(R) = exp(R_0) * exp(R_+) with R_0 the exponent-zero part.

    Raises:
        NotInLambdaZeroError: x has negative valuation
    """
    valuation = ns_val(x)
    if valuation < 0:
        raise NotInLambdaZeroError("not in Λ₀", {"valuation": format_rational(valuation)})
    target = min(order, x.order)
    r0 = x.coefficient(Fraction(0))
    r_plus = NovikovScalar.from_terms([(e, c) for e, c in x.terms if e != 0], x.order)
    if target == math.inf and not r_plus.is_zero():
        raise ValidationError("an untruncated exponential needs a constant input", {"value": repr(x)})

    series = truncate(ONE, target)
    power = truncate(ONE, target)
    n = 0
    while True:
        n += 1
        power = ns_scale(truncate(ns_mul(power, r_plus), target), 1 / n)
        if power.is_zero():
            break
        series = ns_add(series, power)
    return ns_scale(series, cmath.exp(r0))


def ns_equal_mod(x: NovikovScalar, y: NovikovScalar, order: Order, tolerance: float = 1e-12) -> bool:
    """
    x = y modulo T^order, coefficients compared with a relative tolerance

    Raises:
        ValidationError: either value is not known to the requested order
    """
    if min(x.order, y.order) < order:
        raise ValidationError(
            "values are not known to the requested order",
            {"requested": format_order(order), "known": format_order(min(x.order, y.order))},
        )
    exponents = {e for e, _ in x.terms if e < order} | {e for e, _ in y.terms if e < order}
    for exponent in exponents:
        a, b = x.coefficient(exponent), y.coefficient(exponent)
        if abs(a - b) > tolerance * max(1.0, abs(a), abs(b)):
            return False
    return True


def ns_evaluate(x: NovikovScalar, t: float) -> complex:
    """Numerical substitution T = t of the stored terms"""
    return sum((c * t ** float(e) for e, c in x.terms), 0j)


def ns_to_json(x: NovikovScalar) -> Dict[str, Any]:
    """Serialise as {"terms":[{"exp":"p/q","re":..,"im":..}],"order":"p/q"|"inf"}"""
    return {
        "terms": [
            {"exp": format_rational(e), "re": float(c.real), "im": float(c.imag)}
            for e, c in x.terms
        ],
        "order": format_order(x.order),
    }


def ns_from_json(data: Mapping[str, Any]) -> NovikovScalar:
    """Inverse of ns_to_json"""
    order = parse_order(data.get("order", "inf"))
    terms = [
        (parse_rational(term["exp"]), complex(term.get("re", 0.0), term.get("im", 0.0)))
        for term in data.get("terms", [])
    ]
    return NovikovScalar.from_terms(terms, order)


# ============================================================================
# GAPPED MONOIDS
# ============================================================================

@dataclass(frozen=True)
class GappedMonoid:
    """Discrete submonoid of R>=0 generated by finitely many positive rationals"""
    generators: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        for g in self.generators:
            if g <= 0:
                raise ValidationError("monoid generators must be positive", {"generator": format_rational(g)})

    @classmethod
    def of(cls, generators: Iterable[Any]) -> "GappedMonoid":
        """Build from any iterable of rationals, deduplicated and sorted"""
        return cls(tuple(sorted({Fraction(g) for g in generators})))


def monoid_enumerate(m: GappedMonoid, cutoff: Fraction) -> List[Fraction]:
    """
    All non-negative integer combinations of the generators up to cutoff

    Returns:
        Sorted, deduplicated list starting with 0
    """
    cutoff = Fraction(cutoff)
    if cutoff < 0:
        raise ValidationError("cutoff must be non-negative", {"cutoff": format_rational(cutoff)})
    found = {Fraction(0)}
    frontier = [Fraction(0)]
    while frontier:
        following = []
        for element in frontier:
            for g in m.generators:
                total = element + g
                if total <= cutoff and total not in found:
                    found.add(total)
                    following.append(total)
        frontier = following
    return sorted(found)


def monoid_next(m: GappedMonoid, value: Fraction) -> Order:
    """Smallest monoid element strictly greater than value (math.inf if none)"""
    if not m.generators:
        return math.inf
    candidates = monoid_enumerate(m, Fraction(value) + min(m.generators))
    above = [g for g in candidates if g > value]
    return above[0] if above else math.inf
