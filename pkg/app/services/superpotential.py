"""
Bulk-deformed superpotential of L_{k,B} and its critical points

W = W_smooth + W_orb + W_hot with

    W_smooth = T^a sum_i (q_i + q_i^-1) + e^beta sum_i (T^{n(i)C+B} p_i + T^{s(i)C+B} p_i^-1)
    W_orb    = w T^B sum_{i<k-1} eps_i p_{i+1}^-1 p_i (q_{i+1} + q_i^-1)

where n(i) = #{j > i}, s(i) = #{j < i} and w is the orbifold weight. Critical
points are found at leading order in closed form and then refined level by
level over the gapped monoid of admissible exponents.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import settings
from ..core.exceptions import RefinementError, SingularSystemError, ValidationError
from ..utils.logging_utils import get_logger
from ..utils.rational_utils import Order, format_order, format_rational
from .cartan import cartan_matrix
from .configuration import LinkConfig
from .laurent import (
    LaurentPoly,
    evaluate,
    grad,
    log_derivative,
    min_coefficient_order,
    q_index,
)
from .novikov import (
    GappedMonoid,
    NovikovScalar,
    constant,
    monoid_enumerate,
    monoid_next,
    monomial,
    ns_add,
    ns_evaluate,
    ns_exp,
    ns_scale,
    ns_shift,
    ns_to_json,
    ns_val,
    truncate,
)

logger = get_logger(__name__)

DEFAULT_ORBIFOLD_WEIGHT = Fraction(1, 2)
LEADING_RESIDUAL_TOLERANCE = 1e-12
SINGULAR_CONDITION = 1e12


@dataclass(frozen=True)
class SuperpotentialData:
    """A configuration, its bulk parameters and the resulting superpotential"""
    config: LinkConfig
    signs: Tuple[int, ...]
    beta: NovikovScalar
    beta_orb: NovikovScalar
    W: LaurentPoly
    W_hot: LaurentPoly
    orbifold_weight: Fraction = DEFAULT_ORBIFOLD_WEIGHT

    @property
    def k(self) -> int:
        return self.config.k


@dataclass(frozen=True)
class CriticalPoint:
    """Series solution p, q of dW = 0, known modulo T^solved_order and beyond"""
    p: Tuple[NovikovScalar, ...]
    q: Tuple[NovikovScalar, ...]
    solved_order: Fraction
    residual_valuations: Tuple[Order, ...]
    branch: int = 0
    q_signs: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        for value in self.p + self.q:
            if ns_val(value) != 0:
                raise ValidationError("critical point coordinates must be units", {"value": repr(value)})

    @property
    def values(self) -> List[NovikovScalar]:
        """Coordinates in variable order p_0..p_{k-1}, q_0..q_{k-1}"""
        return list(self.p) + list(self.q)

    def leading_values(self) -> List[complex]:
        return [value.coefficient(Fraction(0)) for value in self.values]

    def to_json(self) -> Dict[str, Any]:
        return {
            "branch": self.branch,
            "p": [ns_to_json(value) for value in self.p],
            "q": [ns_to_json(value) for value in self.q],
            "q_signs": list(self.q_signs),
            "residual_valuations": [format_order(v) for v in self.residual_valuations],
            "solved_order": format_rational(self.solved_order),
        }


# ============================================================================
# CONSTRUCTION
# ============================================================================

def orbifold_normalization(B: Fraction, C: Fraction, a: Fraction) -> NovikovScalar:
    """
    beta_orb = sqrt(2) T^{(B-C-a)/2}, the solution of (beta_orb^2/2) T^{C+a} = T^B

    Raises:
        ValidationError: B <= C + a
    """
    exponent = (Fraction(B) - Fraction(C) - Fraction(a)) / 2
    if exponent <= 0:
        raise ValidationError(
            "orbifold normalization has non-positive valuation",
            {"B": format_rational(B), "C": format_rational(C), "a": format_rational(a)},
        )
    return monomial(math.sqrt(2), exponent)


def beta_orb(c: LinkConfig) -> NovikovScalar:
    """Orbifold bulk parameter of a configuration (C = 0 for the equator)"""
    return orbifold_normalization(c.B, c.c_or_zero, c.a)


def _unit(n_vars: int, exponents: Dict[int, int], coefficient: NovikovScalar) -> LaurentPoly:
    return LaurentPoly.monomial(n_vars, exponents, coefficient)


def build_superpotential(c: LinkConfig, signs: Sequence[int], beta: Optional[NovikovScalar] = None,
                         w_hot: Optional[LaurentPoly] = None,
                         orbifold_weight: Fraction = DEFAULT_ORBIFOLD_WEIGHT) -> SuperpotentialData:
    """
    Assemble W for a configuration

    Args:
        c: Configuration
        signs: eps_0..eps_{k-2}, each +1 or -1
        beta: Bulk parameter in Lambda_+ (default 0)
        w_hot: Optional higher orbifold terms; exponents must lie in G_1 and exceed B
        orbifold_weight: Factor w in front of W_orb (1 gives the bracket as displayed)

    Returns:
        SuperpotentialData
    """
    k = c.k
    signs = tuple(int(s) for s in signs)
    if len(signs) != k - 1:
        raise ValidationError("need exactly k-1 signs", {"k": k, "signs": list(signs)})
    if any(s not in (1, -1) for s in signs):
        raise ValidationError("signs must be +1 or -1", {"signs": list(signs)})
    beta = beta if beta is not None else NovikovScalar()
    if not beta.is_zero() and ns_val(beta) <= 0:
        raise ValidationError("beta must have positive valuation",
                              {"valuation": format_order(ns_val(beta))})
    weight = Fraction(orbifold_weight)

    n_vars = 2 * k
    C = c.c_or_zero
    exp_beta = ns_exp(beta, math.inf if beta.is_zero() else settings.series_order_fraction)

    W = LaurentPoly.zero(n_vars)
    for i in range(k):
        W = W + _unit(n_vars, {q_index(k, i): 1}, monomial(1, c.a))
        W = W + _unit(n_vars, {q_index(k, i): -1}, monomial(1, c.a))
        n_i, s_i = k - 1 - i, i
        W = W + _unit(n_vars, {i: 1}, ns_shift(exp_beta, n_i * C + c.B))
        W = W + _unit(n_vars, {i: -1}, ns_shift(exp_beta, s_i * C + c.B))
    for i in range(k - 1):
        coefficient = monomial(complex(weight) * signs[i], c.B)
        W = W + _unit(n_vars, {i + 1: -1, i: 1, q_index(k, i + 1): 1}, coefficient)
        W = W + _unit(n_vars, {i + 1: -1, i: 1, q_index(k, i): -1}, coefficient)

    hot = w_hot if w_hot is not None else LaurentPoly.zero(n_vars)
    if hot.n_vars != n_vars:
        raise ValidationError("W_hot uses a different variable set", {"expected": n_vars, "got": hot.n_vars})
    _check_hot_exponents(c, beta, hot)
    W = W + hot

    logger.debug(f"Built superpotential for k={k}, B={format_rational(c.B)} with {len(W.terms)} monomials")
    return SuperpotentialData(c, signs, beta, beta_orb(c), W, hot, weight)


def _g0_generators(c: LinkConfig, beta: NovikovScalar) -> List[Fraction]:
    generators = [c.a, c.B] + ([c.C] if c.C is not None else [])
    generators += [e for e, _ in beta.terms]
    return generators


def _g1_monoid(c: LinkConfig, beta: NovikovScalar) -> GappedMonoid:
    return GappedMonoid.of(_g0_generators(c, beta) + [(c.B - c.c_or_zero - c.a) / 2])


def _check_hot_exponents(c: LinkConfig, beta: NovikovScalar, hot: LaurentPoly):
    if hot.is_zero():
        return
    g1 = _g1_monoid(c, beta)
    for exponent in hot.exponents():
        if exponent <= c.B:
            raise ValidationError("W_hot exponents must exceed B", {"exponent": format_rational(exponent)})
        if exponent not in monoid_enumerate(g1, exponent):
            logger.warning(f"W_hot exponent {format_rational(exponent)} lies outside G_1")
            raise ValidationError("W_hot exponents must lie in G_1", {"exponent": format_rational(exponent)})


def gapped_monoid(S: SuperpotentialData, cutoff: Fraction = Fraction(2)) -> GappedMonoid:
    """
    Monoid G of correction exponents, exact up to cutoff

    G_0 is generated by a, B, C and the exponents of beta, G_1 adds
    (B-C-a)/2, and G is generated by {g - a : g in G_1, g > a} and
    {g - B : g in G_1, g > B}.
    """
    c = S.config
    cutoff = Fraction(cutoff)
    g1_elements = monoid_enumerate(_g1_monoid(c, S.beta), cutoff + max(c.a, c.B))
    generators = {g - c.a for g in g1_elements if c.a < g <= cutoff + c.a}
    generators |= {g - c.B for g in g1_elements if c.B < g <= cutoff + c.B}
    return GappedMonoid.of(generators)


def normalised_equations(S: SuperpotentialData) -> List[LaurentPoly]:
    """T^-B p_i dW/dp_i for each i, then T^-a q_i dW/dq_i, all with leading exponent 0"""
    k, c = S.k, S.config
    p_equations = [log_derivative(S.W, i).shift(-c.B) for i in range(k)]
    q_equations = [log_derivative(S.W, q_index(k, i)).shift(-c.a) for i in range(k)]
    return p_equations + q_equations


# ============================================================================
# LEADING ORDER
# ============================================================================

def _orbifold_factors(k: int, signs: Sequence[int], q_signs: Sequence[int], weight: Fraction) -> List[Fraction]:
    """c_i = w eps_i (q_{i+1} + q_i^-1) at a q-branch"""
    return [weight * signs[i] * (q_signs[i + 1] + Fraction(1, q_signs[i])) for i in range(k - 1)]


def _zeta_roots(rho: Fraction, k: int) -> List[complex]:
    """All (k+1)-th roots of rho, branch j at angle (arg rho + 2 pi j)/(k+1)"""
    magnitude = abs(float(rho)) ** (1.0 / (k + 1))
    angle = 0.0 if rho > 0 else math.pi
    roots = []
    for j in range(k + 1):
        theta = (angle + 2 * math.pi * j) / (k + 1)
        turns = theta / math.pi
        if abs(turns - round(turns)) < 1e-15 and round(turns) % 2 == 0:
            roots.append(complex(magnitude, 0.0))
        elif abs(turns - round(turns)) < 1e-15:
            roots.append(complex(-magnitude, 0.0))
        else:
            roots.append(cmath.rect(magnitude, theta))
    return roots


def _default_branch(roots: Sequence[complex]) -> int:
    for j, root in enumerate(roots):
        if root.imag == 0.0:
            return j
    return 0


def _leading_point(k: int, factors: Sequence[Fraction], zeta: complex,
                   q_signs: Sequence[int]) -> Tuple[List[complex], List[complex]]:
    p = [zeta]
    for i in range(1, k):
        p.append(complex(factors[i - 1]) * p[i - 1] * zeta)
    return p, [complex(s) for s in q_signs]


def _validated_q_signs(k: int, q_signs: Optional[Sequence[int]]) -> Tuple[int, ...]:
    q_signs = tuple(int(s) for s in q_signs) if q_signs is not None else (1,) * k
    if len(q_signs) != k or any(s not in (1, -1) for s in q_signs):
        raise ValidationError("q branch must be k entries of +1 or -1", {"q_signs": list(q_signs)})
    return q_signs


def leading_branches(c: LinkConfig, signs: Sequence[int], q_signs: Optional[Sequence[int]] = None,
                     orbifold_weight: Fraction = DEFAULT_ORBIFOLD_WEIGHT) -> List[CriticalPoint]:
    """
    All k+1 leading-order solutions for a q-branch

    zeta^{k+1} = 1/prod(c_i), p_0 = zeta, p_i = c_{i-1} p_{i-1} zeta.

    Raises:
        ValidationError: a leading orbifold coefficient c_i vanishes
    """
    k = c.k
    if len(signs) != k - 1:
        raise ValidationError("need exactly k-1 signs", {"k": k, "signs": list(signs)})
    q_signs = _validated_q_signs(k, q_signs)
    factors = _orbifold_factors(k, signs, q_signs, Fraction(orbifold_weight))
    if any(f == 0 for f in factors):
        raise ValidationError("degenerate q-branch: a leading orbifold coefficient vanishes",
                              {"q_signs": list(q_signs)})
    product = Fraction(1)
    for f in factors:
        product *= f
    rho = 1 / product
    branches = []
    for j, zeta in enumerate(_zeta_roots(rho, k)):
        p, q = _leading_point(k, factors, zeta, q_signs)
        branches.append(_exact_point(p, q, branch=j, q_signs=q_signs))
    return branches


def _exact_point(p: Sequence[complex], q: Sequence[complex], branch: int,
                 q_signs: Sequence[int]) -> CriticalPoint:
    return CriticalPoint(
        tuple(constant(v) for v in p),
        tuple(constant(v) for v in q),
        Fraction(0),
        (),
        branch,
        tuple(q_signs),
    )


def leading_solution(c: LinkConfig, signs: Sequence[int], branch: Optional[int] = None,
                     q_signs: Optional[Sequence[int]] = None,
                     orbifold_weight: Fraction = DEFAULT_ORBIFOLD_WEIGHT) -> CriticalPoint:
    """
    Closed-form leading solution

    The default branch is a real root of zeta^{k+1} = 1/prod(c_i) when one
    exists, otherwise the principal root; q_i = +1 unless q_signs is given.
    """
    branches = leading_branches(c, signs, q_signs, orbifold_weight)
    if branch is None:
        branch = _default_branch([b.p[0].coefficient(Fraction(0)) for b in branches])
    if not 0 <= branch < len(branches):
        raise ValidationError("branch index out of range", {"branch": branch, "branches": len(branches)})
    chosen = branches[branch]
    S = build_superpotential(c, signs, orbifold_weight=orbifold_weight)
    return _with_residuals(S, chosen, math.inf)


def recursion_signs(c: LinkConfig, signs: Sequence[int], q_signs: Optional[Sequence[int]] = None,
                    orbifold_weight: Fraction = DEFAULT_ORBIFOLD_WEIGHT) -> List[Fraction]:
    """
    Right-hand sides sigma_i of p_{i-1}^-1 p_i^2 p_{i+1}^-1 = sigma_i (p_{-1} = p_k = 1)

    sigma_0 = 1/c_0, sigma_i = c_{i-1}/c_i, sigma_{k-1} = c_{k-2}; sigma_0 = 1 for k = 1.
    """
    k = c.k
    q_signs = _validated_q_signs(k, q_signs)
    factors = _orbifold_factors(k, signs, q_signs, Fraction(orbifold_weight))
    if k == 1:
        return [Fraction(1)]
    if any(f == 0 for f in factors):
        raise ValidationError("degenerate q-branch: a leading orbifold coefficient vanishes")
    sigma = [1 / factors[0]]
    sigma += [factors[i - 1] / factors[i] for i in range(1, k - 1)]
    sigma.append(factors[k - 2])
    return sigma


def recursion_defects(p: Sequence[complex], sigma: Sequence[Fraction]) -> List[complex]:
    """p_{i-1}^-1 p_i^2 p_{i+1}^-1 - sigma_i for each i"""
    k = len(p)
    padded = [1 + 0j] + list(p) + [1 + 0j]
    return [padded[i] ** -1 * padded[i + 1] ** 2 * padded[i + 2] ** -1 - complex(sigma[i]) for i in range(k)]


def leading_solution_via_cartan(c: LinkConfig, signs: Sequence[int],
                                orbifold_weight: Fraction = DEFAULT_ORBIFOLD_WEIGHT) -> CriticalPoint:
    """
    Solve A_k P = Log sigma with principal logarithms and take p_i = exp(P_i)

    The result is matched against the closed-form branches.

    Raises:
        SingularSystemError: the Cartan system could not be solved
        RefinementError: no closed-form branch reproduces the Cartan solution
    """
    k = c.k
    sigma = recursion_signs(c, signs, orbifold_weight=orbifold_weight)
    rhs = np.array([cmath.log(complex(s)) for s in sigma])
    try:
        P = np.linalg.solve(cartan_matrix(k).astype(float), rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError("Cartan system is singular", {"k": k}) from exc
    p = [complex(v) for v in np.exp(P)]

    branches = leading_branches(c, signs, orbifold_weight=orbifold_weight)
    for candidate in branches:
        leading = [v.coefficient(Fraction(0)) for v in candidate.p]
        if max(abs(x - y) for x, y in zip(leading, p)) <= 1e-9:
            S = build_superpotential(c, signs, orbifold_weight=orbifold_weight)
            return _with_residuals(S, candidate, math.inf)
    raise RefinementError("Cartan solution matches no closed-form branch", details={"p": [str(v) for v in p]})


def leading_residuals(S: SuperpotentialData, point: CriticalPoint) -> List[complex]:
    """Exponent-0 coefficients of the normalised equations at the leading values"""
    values = [constant(v) for v in point.leading_values()]
    return [evaluate(G, values, math.inf).coefficient(Fraction(0)) for G in normalised_equations(S)]


def leading_jacobian(S: SuperpotentialData, point: CriticalPoint) -> np.ndarray:
    """
    Exponent-0 part of d G_j / d log z_l at the leading values

    Block triangular with (+-2) Id_k on the q-block and zeta^-1 A_k on the p-block.
    """
    values = [constant(v) for v in point.leading_values()]
    equations = normalised_equations(S)
    n = len(values)
    jacobian = np.zeros((n, n), dtype=complex)
    for j, G in enumerate(equations):
        for l in range(n):
            jacobian[j, l] = evaluate(log_derivative(G, l), values, math.inf).coefficient(Fraction(0))
    return jacobian


# ============================================================================
# REFINEMENT
# ============================================================================

def _residual_valuations(S: SuperpotentialData, values: Sequence[NovikovScalar], order: Order) -> Tuple[Order, ...]:
    valuations = []
    for component in grad(S.W):
        value = evaluate(component, values, order)
        valuations.append(min(ns_val(value), value.order))
    return tuple(valuations)


def _with_residuals(S: SuperpotentialData, point: CriticalPoint, order: Order) -> CriticalPoint:
    return CriticalPoint(
        point.p,
        point.q,
        point.solved_order,
        _residual_valuations(S, point.values, order),
        point.branch,
        point.q_signs,
    )


def _residuals_at(equations: Sequence[LaurentPoly], base: Sequence[complex], logs: Sequence[NovikovScalar],
                  order: Fraction) -> Tuple[List[NovikovScalar], List[NovikovScalar]]:
    """Point z = base * exp(logs) and the normalised equations evaluated there"""
    values = [ns_scale(ns_exp(x, order), b) for x, b in zip(logs, base)]
    inverses = [ns_scale(ns_exp(ns_scale(x, -1), order), 1 / b) for x, b in zip(logs, base)]
    cache: Dict[Tuple[int, int], NovikovScalar] = {}
    residuals = [evaluate(G, values, order, inverses=inverses, cache=cache) for G in equations]
    return values, residuals


def _solve_level(jacobian: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if np.linalg.cond(jacobian) > SINGULAR_CONDITION:
        raise SingularSystemError("leading Jacobian is singular")
    try:
        return np.linalg.solve(jacobian, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError("leading Jacobian is singular") from exc


def refine_critical_point(S: SuperpotentialData, start: CriticalPoint, g_max: Fraction) -> CriticalPoint:
    """
    Lift a leading solution order by order over the gapped monoid

    Writes q_i = q_i^0 exp(Q_i), p_i = xi_i exp(P_i) and, for each monoid
    level 0 < g <= g_max, solves J0 delta = -[residual]_g for the T^g
    correction, J0 being the leading log-Jacobian.

    Args:
        S: Superpotential data
        start: Leading-order solution
        g_max: Highest level to solve

    Returns:
        CriticalPoint known modulo T^g' with g' the next monoid element above g_max

    Raises:
        ValidationError: start is not a leading solution, or W is truncated too low
        SingularSystemError: leading Jacobian not invertible
        RefinementError: a residual term below the current level survived
    """
    g_max = Fraction(g_max)
    if g_max < 0:
        raise ValidationError("g_max must be non-negative", {"g_max": format_rational(g_max)})
    defects = leading_residuals(S, start)
    if max((abs(d) for d in defects), default=0.0) > LEADING_RESIDUAL_TOLERANCE:
        raise ValidationError("start does not solve the leading-order equations",
                              {"defects": [str(d) for d in defects]})
    if g_max == 0:
        return start

    monoid = gapped_monoid(S, g_max + 1)
    levels = [g for g in monoid_enumerate(monoid, g_max) if g > 0]
    working = monoid_next(monoid, g_max)
    equations = normalised_equations(S)
    known = min(min_coefficient_order(G) for G in equations)
    if known < working:
        raise ValidationError(
            "superpotential coefficients are truncated below the working order",
            {"known": format_order(known), "working": format_order(working)},
        )

    jacobian = leading_jacobian(S, start)
    base = start.leading_values()
    logs = [truncate(NovikovScalar(), working) for _ in base]

    logger.info(f"Refining k={S.k} critical point over {len(levels)} levels up to {format_rational(g_max)}")
    for g in levels:
        values, residuals = _residuals_at(equations, base, logs, working)
        for j, residual in enumerate(residuals):
            if ns_val(residual) < g:
                raise RefinementError(
                    "residual did not improve",
                    level=format_rational(g),
                    details={"equation": j, "valuation": format_order(ns_val(residual))},
                )
        rhs = np.array([-residual.coefficient(g) for residual in residuals])
        if not np.any(rhs):
            continue
        delta = _solve_level(jacobian, rhs)
        logs = [ns_add(logs[l], monomial(complex(delta[l]), g, working)) for l in range(len(logs))]
        logger.debug(f"level {format_rational(g)}: |delta| = {float(np.max(np.abs(delta))):.3e}")

    values, residuals = _residuals_at(equations, base, logs, working)
    for j, residual in enumerate(residuals):
        if not residual.is_zero():
            raise RefinementError(
                "residual did not vanish at the working order",
                level=format_order(working),
                details={"equation": j, "valuation": format_order(ns_val(residual))},
            )

    k = S.k
    refined = CriticalPoint(
        tuple(values[:k]),
        tuple(values[k:]),
        g_max,
        (),
        start.branch,
        start.q_signs,
    )
    return _with_residuals(S, refined, working + max(S.config.a, S.config.B))


def evaluate_series_point(point: CriticalPoint, t: float) -> List[complex]:
    """Numerical substitution T = t into every coordinate"""
    if not 0 < t < 1:
        raise ValidationError("t must lie in (0, 1)", {"t": t})
    return [ns_evaluate(value, t) for value in point.values]
