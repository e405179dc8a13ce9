"""
Experiment pipelines shared by the command line and the MCP tools

Each subcommand has a parameter model (validated before anything runs) and a
pipeline returning a report dictionary. Reports hold exact values as
Fractions; response_utils.to_jsonable turns them into "p/q" strings.
"""

import math
from fractions import Fraction
from typing import Annotated, Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Type

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from ..core.constants import CSV_SWEEP_COLUMNS, DEFAULT_APPROXIMANTS, SUBCOMMANDS
from ..core.exceptions import UsageError, ValidationError
from ..utils.logging_utils import get_logger, log_duration
from ..utils.rational_utils import parse_rational, rational_grid
from .cartan import direct_sum_invertible, verify_cartan_spectrum
from .configuration import LinkConfig, make_config, max_a
from .estimators import (
    ESTIMATOR_KINDS,
    axiom_suite,
    c0_timedep,
    calabi_limit,
    direct_zeta0,
    estimator_sweep,
    evaluate_estimator,
    tau,
)
from .hofer import (
    bilipschitz_constant,
    flat_bounds,
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
from .laurent import LaurentPoly, q_index, variable_names
from .nonresonance import check_nonresonance, radii_from_strings
from .novikov import NovikovScalar, monoid_enumerate, monomial, ns_add, ns_to_json
from .oracle import oracle_comparison
from .profiles import TimeDepRadial, parse_profile, time_poly
from .recurrence import (
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
from .superpotential import (
    DEFAULT_ORBIFOLD_WEIGHT,
    build_superpotential,
    gapped_monoid,
    leading_solution,
    leading_solution_via_cartan,
    refine_critical_point,
)

logger = get_logger(__name__)

GOLDEN_ROTATION = (math.sqrt(5) - 1) / 2
DEFAULT_TAU_PROFILE = "poly:[0,1]@[0,1/2]"


# ============================================================================
# PARAMETER TYPES
# ============================================================================

def _rational(value: Any) -> Fraction:
    if isinstance(value, float):
        value = repr(value)
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {value!r}") from exc


def _comma_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


Rational = Annotated[Fraction, BeforeValidator(_rational)]
RationalList = Annotated[List[Rational], BeforeValidator(_comma_list)]
IntList = Annotated[List[int], BeforeValidator(_comma_list)]
FloatList = Annotated[List[float], BeforeValidator(_comma_list)]
StrList = Annotated[List[str], BeforeValidator(_comma_list)]


class PipelineParams(BaseModel):
    """Base for subcommand parameters; unknown keys are rejected"""
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True, frozen=True)

    def require(self, *names: str):
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise ValidationError("missing parameters", {"missing": missing})


class SuperpotentialParams(PipelineParams):
    k: int = Field(ge=1)
    B: Rational
    a: Optional[Rational] = None
    signs: Optional[IntList] = None
    order: Rational = Fraction(0)
    branch: Optional[int] = None
    q_signs: Optional[IntList] = None
    orbifold_weight: Rational = DEFAULT_ORBIFOLD_WEIGHT
    beta: Optional[str] = None
    hot: Optional[str] = None
    via_cartan: bool = False
    oracle: bool = True
    oracle_ts: FloatList = Field(default_factory=lambda: [1e-2, 1e-3])


class EstimateParams(PipelineParams):
    kind: str = "zeta0"
    k: Optional[int] = Field(default=None, ge=1)
    B: Optional[Rational] = None
    a: Optional[Rational] = None
    profile: str
    time: Optional[RationalList] = None
    kp: int = Field(default=1, ge=1)
    Bp: Rational = Fraction(1, 2)
    ks: Optional[IntList] = None
    Bs: Optional[RationalList] = None


class TauConvergenceParams(PipelineParams):
    B: Rational
    profile: str = DEFAULT_TAU_PROFILE
    k_max: int = Field(default=10**4, ge=6)


class FlatParams(PipelineParams):
    mode: str = "bounds"
    profile: str
    a: Optional[Rational] = None
    approximants: int = Field(default=DEFAULT_APPROXIMANTS, ge=1)
    k: Optional[int] = None
    B: Optional[Rational] = None
    upsilon: bool = False


class PackingParams(PipelineParams):
    mode: str = "u_r"
    r: Optional[Rational] = None
    delta: Rational = Fraction(1, 1000)
    a: Optional[Rational] = None
    rs: Optional[RationalList] = None
    denominator: int = Field(default=60, ge=2)
    r_low: Rational = Fraction(1, 4)
    r_high: Rational = Fraction(1, 2)
    l: Optional[int] = None
    area: Optional[Rational] = None
    rho_g: Optional[float] = None
    d_g: Optional[float] = None


class RecurrenceParams(PipelineParams):
    mode: str = "enumerate"
    k: Optional[int] = None
    window: Optional[int] = None
    D: Optional[IntList] = None
    A: Optional[IntList] = None
    m: Optional[int] = None
    alpha: float = GOLDEN_ROTATION
    r: Optional[float] = None


class AxiomParams(PipelineParams):
    k: int = Field(ge=1)
    B: Rational
    a: Optional[Rational] = None
    samples: int = Field(default=200, ge=1)
    seed: int = 0


class NonResonanceParams(PipelineParams):
    r: StrList
    rho: StrList
    coeff_bound: int = Field(default=10, ge=1)
    tolerance: Optional[float] = Field(default=None, gt=0)


def parse_params(model: Type[PipelineParams], data: Mapping[str, Any]) -> PipelineParams:
    """
    Validate raw parameters against a subcommand model

    Raises:
        ValidationError: listing every offending field
    """
    try:
        return model.model_validate(dict(data))
    except PydanticValidationError as exc:
        errors = [
            {"field": ".".join(str(part) for part in error["loc"]), "message": error["msg"]}
            for error in exc.errors()
        ]
        raise ValidationError("invalid parameters", {"errors": errors}) from exc


def default_a(k: int, B: Fraction) -> Fraction:
    """Half the supremum of admissible a"""
    return max_a(k, Fraction(B)) / 2


def config_from(k: int, B: Fraction, a: Optional[Fraction]) -> LinkConfig:
    return make_config(k, B, default_a(k, B) if a is None else a)


# ============================================================================
# SERIES GRAMMAR
# ============================================================================

def _scalar(text: str) -> complex:
    try:
        return complex(float(parse_rational(text)))
    except (ValueError, ZeroDivisionError):
        try:
            return complex(text.replace("i", "j"))
        except ValueError as exc:
            raise ValidationError("cannot parse coefficient", {"value": text}) from exc


def _parse_monomial_term(term: str, k: Optional[int]) -> Tuple[complex, Fraction, Dict[int, int]]:
    """`[-][coef*]T^e[*p0^n*q1...]` into (coefficient, exponent, {variable: power})"""
    term = term.strip()
    sign = 1
    if term.startswith("-"):
        sign, term = -1, term[1:].strip()
    coefficient, exponent, powers = complex(sign), Fraction(0), {}
    for factor in (f.strip() for f in term.split("*")):
        base, _, power = factor.partition("^")
        if base == "T":
            exponent += parse_rational(power or "1")
        elif base[:1] in ("p", "q") and base[1:].isdigit():
            if k is None:
                raise ValidationError("variables are not allowed here", {"factor": factor})
            i = int(base[1:])
            if i >= k:
                raise ValidationError("variable index out of range", {"factor": factor, "k": k})
            index = i if base[0] == "p" else q_index(k, i)
            powers[index] = powers.get(index, 0) + int(power or "1")
        else:
            coefficient *= _scalar(factor)
    return coefficient, exponent, powers


def parse_novikov(text: str) -> NovikovScalar:
    """
    Parse a finite Novikov series such as "T^1/5 + 0.5*T^3/10"

    Example:
        >>> ns_val(parse_novikov("2*T^1/5"))
        Fraction(1, 5)
    """
    total = NovikovScalar()
    for term in text.split("+"):
        if term.strip():
            coefficient, exponent, _ = _parse_monomial_term(term, None)
            total = ns_add(total, monomial(coefficient, exponent))
    return total


def parse_hot_terms(text: str, k: int) -> LaurentPoly:
    """Parse W_hot monomials such as "T^3/5*p0*q1^-1 + -2*T^7/10*p1" """
    n_vars = 2 * k
    total = LaurentPoly.zero(n_vars)
    for term in text.split("+"):
        if term.strip():
            coefficient, exponent, powers = _parse_monomial_term(term, k)
            total = total + LaurentPoly.monomial(n_vars, powers, monomial(coefficient, exponent))
    return total


# ============================================================================
# PIPELINES
# ============================================================================

def superpotential_report(params: SuperpotentialParams) -> Dict[str, Any]:
    """Leading solution, refinement to T^order, Cartan check and oracle table"""
    c = config_from(params.k, params.B, params.a)
    signs = params.signs if params.signs is not None else [1] * (c.k - 1)
    beta = parse_novikov(params.beta) if params.beta else None
    hot = parse_hot_terms(params.hot, c.k) if params.hot else None
    S = build_superpotential(c, signs, beta, hot, params.orbifold_weight)

    if params.via_cartan:
        start = leading_solution_via_cartan(c, signs, params.orbifold_weight)
    else:
        start = leading_solution(c, signs, params.branch, params.q_signs, params.orbifold_weight)
    point = refine_critical_point(S, start, params.order)

    report: Dict[str, Any] = {
        "config": c.to_json(),
        "signs": list(S.signs),
        "orbifold_weight": S.orbifold_weight,
        "beta": ns_to_json(S.beta),
        "beta_orb": ns_to_json(S.beta_orb),
        "superpotential": S.W.describe(variable_names(c.k)),
        "monoid": monoid_enumerate(gapped_monoid(S, params.order + 1), params.order),
        "cartan": verify_cartan_spectrum(c.k),
        "jacobian_invertible": direct_sum_invertible(c.k),
    }
    report.update(point.to_json())
    if params.oracle:
        report["oracle"] = oracle_comparison(S, point, params.oracle_ts)
    return report


def estimate_report(params: EstimateParams) -> Dict[str, Any]:
    """Single estimator value, or a (k, B) sweep when ks/Bs are given"""
    if params.kind not in ESTIMATOR_KINDS:
        raise ValidationError("unknown estimator kind", {"kind": params.kind, "allowed": list(ESTIMATOR_KINDS)})
    h = parse_profile(params.profile)
    if params.ks is not None or params.Bs is not None:
        params.require("ks", "Bs")
        rows = estimator_sweep(params.kind, params.ks, params.Bs, h)
        return {"kind": params.kind, "profile": params.profile, "rows": rows}

    params.require("k", "B")
    c = config_from(params.k, params.B, params.a)
    if params.kind == "c0" and params.time:
        value = c0_timedep(c, TimeDepRadial(((time_poly(params.time), h),)))
    elif params.kind == "tau":
        value = tau(c.k, c.B, params.kp, params.Bp, h)
    else:
        value = evaluate_estimator(params.kind, c, h).value
    report = {"kind": params.kind, "config": c.to_json(), "profile": params.profile, "value": value}
    if params.kind in ("zeta0", "mu0"):
        report["direct_check"] = direct_zeta0(c.k, c.B, h)
    return report


def tau_convergence_report(params: TauConvergenceParams) -> Dict[str, Any]:
    report = calabi_limit(params.B, parse_profile(params.profile), params.k_max)
    report["profile"] = params.profile
    return report


def flat_report(params: FlatParams) -> Dict[str, Any]:
    """Flat lower bounds ("bounds") or the ker-Calabi flat Phi_k ("phi-k")"""
    h = parse_profile(params.profile)
    if params.mode == "bounds":
        params.require("a")
        report = flat_bounds(h, params.a, params.approximants)
        report["profile"] = params.profile
        return report
    if params.mode == "phi-k":
        params.require("k", "B")
        if params.upsilon:
            lo, hi = interval_i_k(params.k)
            h = upsilon_profile(params.k, h.restrict(lo, (lo + hi) / 2))
        report = phi_k_flat(params.k, params.B, h)
        report["max_h"] = h.argmax()[1]
        return report
    raise UsageError("unknown flat mode", {"mode": params.mode, "allowed": ["bounds", "phi-k"]})


def _grid_radii(params: PackingParams) -> List[Fraction]:
    if params.rs is not None:
        return list(params.rs)
    grid = rational_grid(params.r_low, params.r_high, params.denominator)
    return [r for r in grid if r.numerator != 1]


def packing_report(params: PackingParams) -> Dict[str, Any]:
    """u(r) sharpness, packing bounds and the bi-Lipschitz constant"""
    mode = params.mode
    if mode == "u_r":
        params.require("r")
        return u_r(params.r, params.delta, params.a)
    if mode == "grid":
        rows = u_r_grid(_grid_radii(params), params.delta)
        return {"delta": params.delta, "rows": rows, "all_sharp": all(row["sharp"] for row in rows)}
    if mode == "stabilized":
        params.require("r", "a")
        lower, upper, k = stabilized_u(params.r, params.delta, params.a)
        return {"r": params.r, "delta": params.delta, "a": params.a, "k": k, "lower": lower, "upper": upper}
    if mode == "number":
        params.require("r", "a")
        return {"r": params.r, "a": params.a, "k": packing_number_bound(params.r, params.a)}
    if mode == "sikorav":
        params.require("l", "area")
        return {"l": params.l, "area": params.area, "upper": sikorav_upper(params.l, params.area)}
    if mode == "bilipschitz":
        params.require("rho_g", "d_g")
        report = verify_bilipschitz(params.rho_g, params.d_g)
        bilipschitz_constant(params.rho_g, params.d_g)
        return report
    raise UsageError("unknown packing mode", {
        "mode": mode, "allowed": ["u_r", "grid", "stabilized", "number", "sikorav", "bilipschitz"],
    })


def _difference_set(params: RecurrenceParams) -> DifferenceSet:
    params.require("D")
    window = params.window if params.window is not None else max(params.D, default=1)
    return DifferenceSet.of(params.D, window)


def recurrence_report(params: RecurrenceParams) -> Dict[str, Any]:
    """Exhaustive enumeration, rotation oracle and single-set checks"""
    mode = params.mode
    if mode == "enumerate":
        params.require("k", "window")
        return enumerate_and_verify(params.k, params.window).to_json()
    if mode == "rotation":
        params.require("r")
        return rotation_densities(RotationModel(params.alpha, params.r), params.window or 10**5)
    if mode == "density":
        params.require("k", "m")
        return density_bound_check(_difference_set(params), params.k, params.m)
    if mode == "subset":
        params.require("k", "A")
        return subset_recurrence_check(_difference_set(params), params.A, params.k)
    if mode == "schur":
        d = _difference_set(params)
        return {"D": sorted(d.D), "schur_free": schur_free(d.D), "triangle_free": not has_delta_clique(d, 3)}
    if mode == "clique":
        d = _difference_set(params)
        return {"D": sorted(d.D), "N": d.N, "clique": list(max_delta_clique(d)),
                "recurrence_set": recurrence_set(d)}
    raise UsageError("unknown recurrence mode", {
        "mode": mode, "allowed": ["enumerate", "rotation", "density", "subset", "schur", "clique"],
    })


def axioms_report(params: AxiomParams) -> Dict[str, Any]:
    c = config_from(params.k, params.B, params.a)
    return axiom_suite(c, seed=params.seed, n_samples=params.samples)


def nonresonance_report(params: NonResonanceParams) -> Dict[str, Any]:
    r, rho = radii_from_strings(params.r), radii_from_strings(params.rho)
    report = check_nonresonance(r, rho, params.coeff_bound, params.tolerance).to_json()
    report.update({"r": params.r, "rho": params.rho, "coeff_bound": params.coeff_bound})
    return report


PIPELINES: Dict[str, Tuple[Type[PipelineParams], Callable[[Any], Dict[str, Any]]]] = {
    "superpotential": (SuperpotentialParams, superpotential_report),
    "estimate": (EstimateParams, estimate_report),
    "tau-convergence": (TauConvergenceParams, tau_convergence_report),
    "flat": (FlatParams, flat_report),
    "packing": (PackingParams, packing_report),
    "recurrence": (RecurrenceParams, recurrence_report),
    "axioms": (AxiomParams, axioms_report),
    "nonresonance": (NonResonanceParams, nonresonance_report),
}

# Field receiving the optional positional word after the subcommand
POSITIONAL_FIELDS = {"estimate": "kind", "flat": "mode", "packing": "mode", "recurrence": "mode"}


def accepts(subcommand: str, name: str) -> bool:
    """Whether the subcommand's parameter model has the given field"""
    return name in PIPELINES[subcommand][0].model_fields


def run_pipeline(subcommand: str, data: Mapping[str, Any]) -> Dict[str, Any]:
    """
    Validate parameters and run a subcommand pipeline

    Raises:
        UsageError: unknown subcommand or mode
        ValidationError: invalid parameters or violated preconditions
        NumericalError: oracle divergence, refinement or bound failures
    """
    if subcommand not in PIPELINES:
        raise UsageError("unknown subcommand", {"subcommand": subcommand, "allowed": list(SUBCOMMANDS)})
    model, pipeline = PIPELINES[subcommand]
    params = parse_params(model, data)
    logger.info(f"Running {subcommand} with {params.model_dump(exclude_none=True)}")
    with log_duration(logger, subcommand):
        return pipeline(params)


def tabular_rows(subcommand: str, report: Mapping[str, Any]) -> Tuple[Optional[Sequence[str]], List[Dict[str, Any]]]:
    """
    Rows and column order for CSV output

    Raises:
        ValidationError: the report has no table
    """
    if subcommand == "estimate" and "rows" in report:
        return CSV_SWEEP_COLUMNS, report["rows"]
    for key in ("rows", "table"):
        if key in report:
            return None, report[key]
    if subcommand == "superpotential" and "oracle" in report:
        return None, report["oracle"]["rows"]
    raise ValidationError("csv output needs a tabular result", {"subcommand": subcommand})
