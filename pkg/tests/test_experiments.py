from fractions import Fraction

import pytest

from app.core.constants import CSV_SWEEP_COLUMNS
from app.core.exceptions import UsageError, ValidationError
from app.services.experiments import (
    AxiomParams,
    EstimateParams,
    accepts,
    default_a,
    parse_hot_terms,
    parse_novikov,
    parse_params,
    run_pipeline,
    tabular_rows,
)
from app.services.laurent import q_index
from app.services.novikov import ns_val


def test_params_accept_text_rationals():
    params = parse_params(EstimateParams, {"k": "2", "B": "2/5", "profile": "const:1"})
    assert params.B == Fraction(2, 5)
    assert params.kind == "zeta0"


def test_params_list_every_error():
    with pytest.raises(ValidationError) as excinfo:
        parse_params(AxiomParams, {"k": 0, "B": "x/y", "colour": "red"})
    fields = {error["field"] for error in excinfo.value.details["errors"]}
    assert {"k", "B", "colour"} <= fields


def test_default_a_is_half_the_supremum():
    assert default_a(2, Fraction(2, 5)) == Fraction(1, 10)


def test_parse_novikov():
    x = parse_novikov("2*T^1/5 + 0.5*T^3/10")
    assert ns_val(x) == Fraction(1, 5)
    assert len(x.terms) == 2
    with pytest.raises(ValidationError):
        parse_novikov("2*p0")


def test_parse_hot_terms():
    hot = parse_hot_terms("T^3/5*p0*q1^-1 + -2*T^7/10*p1", 2)
    assert hot.n_vars == 4
    monomials = [monomial for monomial, _ in hot.terms]
    assert (1, 0, 0, -1) in monomials
    assert (0, 1, 0, 0) in monomials
    assert q_index(2, 1) == 3
    with pytest.raises(ValidationError):
        parse_hot_terms("T*p2", 2)


def test_estimate_pipeline(single_worker):
    report = run_pipeline("estimate", {"k": 2, "B": "2/5", "profile": "poly:[0,0,1]"})
    assert report["value"] == Fraction(1, 100)
    assert report["direct_check"] == pytest.approx(0.01, abs=1e-12)


def test_estimate_sweep_rows(single_worker):
    report = run_pipeline("estimate", {"ks": "2,3", "Bs": "1/4,2/5", "profile": "poly:[0,0,1]"})
    columns, rows = tabular_rows("estimate", report)
    assert columns == CSV_SWEEP_COLUMNS
    assert [(row["k"], row["B"]) for row in rows] == [(2, Fraction(2, 5)), (3, Fraction(2, 5))]


def test_estimate_requires_a_configuration():
    with pytest.raises(ValidationError):
        run_pipeline("estimate", {"profile": "const:1"})


def test_recurrence_pipeline_modes():
    schur = run_pipeline("recurrence", {"mode": "schur", "D": "1,3,5"})
    assert schur == {"D": [1, 3, 5], "schur_free": True, "triangle_free": True}
    clique = run_pipeline("recurrence", {"mode": "clique", "D": "2,3,5"})
    assert clique["clique"] == [0, 2, 5]


def test_packing_pipeline():
    assert run_pipeline("packing", {"mode": "number", "r": "3/10", "a": "1/20"})["k"] == 3
    report = run_pipeline("packing", {"mode": "u_r", "r": "3/10", "delta": "1/100"})
    assert report["sharp"]


def test_nonresonance_pipeline():
    report = run_pipeline("nonresonance", {"r": "1,2", "rho": "1,3", "coeff_bound": 3})
    assert not report["holds"]
    assert report["relation"] is not None


def test_unknown_subcommand_and_mode():
    with pytest.raises(UsageError):
        run_pipeline("hologram", {})
    with pytest.raises(UsageError):
        run_pipeline("flat", {"mode": "sideways", "profile": "const:1"})
    with pytest.raises(UsageError):
        run_pipeline("recurrence", {"mode": "sideways"})


def test_seed_is_only_accepted_by_axioms():
    assert accepts("axioms", "seed")
    assert not accepts("estimate", "seed")


def test_tabular_rows_needs_a_table():
    with pytest.raises(ValidationError):
        tabular_rows("packing", {"k": 3})
