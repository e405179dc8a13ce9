from fractions import Fraction

import pytest

from app.core.exceptions import ValidationError
from app.services.configuration import (
    LinkConfig,
    WeightedTree,
    check_rational_parameters,
    complement_tree,
    levels,
    linear_matching_property,
    make_config,
    make_levels,
    max_a,
    tree_matching_property,
)


def test_make_config_computes_annulus_area(two_circle_config):
    assert two_circle_config.C == Fraction(1, 5)
    assert two_circle_config.to_json() == {"k": 2, "B": "2/5", "C": "1/5", "a": "1/10"}


@pytest.mark.parametrize("k, B, a, message", [
    (2, Fraction(1, 4), Fraction(1, 10), "C < B"),
    (2, Fraction(2, 5), Fraction(1, 5), "a < B - C"),
    (3, Fraction(3, 10), Fraction(0), "0 < a"),
    (1, Fraction(2, 5), Fraction(1, 10), "B = 1/2"),
    (0, Fraction(1, 2), Fraction(1, 10), "at least 1"),
])
def test_make_config_names_violated_inequality(k, B, a, message):
    with pytest.raises(ValidationError) as excinfo:
        make_config(k, B, a)
    assert message in excinfo.value.message


def test_equator_has_no_annulus():
    c = make_config(1, Fraction(1, 2), Fraction(1, 4))
    assert c.C is None
    assert c.c_or_zero == 0
    assert "C" not in c.to_json()


def test_direct_construction_checks_area_identity():
    with pytest.raises(ValidationError):
        LinkConfig(2, Fraction(2, 5), Fraction(1, 4), Fraction(1, 10))


def test_json_round_trip_cross_checks_c(two_circle_config):
    assert LinkConfig.from_json(two_circle_config.to_json()) == two_circle_config
    with pytest.raises(ValidationError):
        LinkConfig.from_json({"k": 2, "B": "2/5", "C": "1/4", "a": "1/10"})


def test_max_a():
    assert max_a(2, Fraction(2, 5)) == Fraction(1, 5)
    assert max_a(3, Fraction(3, 10)) == Fraction(1, 10)
    assert max_a(1, Fraction(1, 2)) == Fraction(1, 2)


def test_levels_two_circles(two_circle_config):
    measure = levels(two_circle_config)
    assert measure.atoms == (Fraction(-1, 10), Fraction(1, 10))
    assert measure.weight == Fraction(1, 2)


def test_levels_three_circles():
    assert make_levels(3, Fraction(3, 10)).atoms == (Fraction(-1, 5), Fraction(0), Fraction(1, 5))


def test_levels_are_symmetric_and_evenly_spaced():
    for k, B in [(2, Fraction(2, 5)), (4, Fraction(1, 4)), (5, Fraction(1, 5)), (7, Fraction(3, 20))]:
        atoms = make_levels(k, B).atoms
        assert sum(atoms) == 0
        assert len({b - a for a, b in zip(atoms, atoms[1:])}) <= 1


def test_make_levels_equator():
    assert make_levels(1, Fraction(1, 2)).atoms == (Fraction(0),)
    with pytest.raises(ValidationError):
        make_levels(1, Fraction(1, 3))


def test_make_levels_rejects_wide_annuli():
    with pytest.raises(ValidationError):
        make_levels(2, Fraction(1, 4))


def test_complement_tree_is_a_chain(three_circle_config):
    tree = complement_tree(three_circle_config)
    assert tree.weights == (Fraction(3, 10), Fraction(1, 5), Fraction(1, 5), Fraction(3, 10))
    assert tree.is_chain()
    assert tree_matching_property(tree)


def test_linear_matching_property():
    assert linear_matching_property(3, Fraction(1, 3), Fraction(1, 6))
    assert not linear_matching_property(3, Fraction(1, 4), Fraction(1, 4))
    with pytest.raises(ValidationError):
        linear_matching_property(3, Fraction(1, 3), Fraction(1, 5))


def test_star_tree_is_not_decided():
    star = WeightedTree(((0, 1), (0, 2), (0, 3)), (Fraction(1, 4),) * 4)
    assert not star.is_chain()
    with pytest.raises(ValidationError):
        tree_matching_property(star)


def test_disconnected_graph_rejected():
    with pytest.raises(ValidationError):
        WeightedTree(((0, 1), (0, 1)), (Fraction(1, 3),) * 3)


def test_rational_parameters_report_offender():
    assert check_rational_parameters({"B": "2/5", "a": 0}) == {"B": Fraction(2, 5), "a": Fraction(0)}
    with pytest.raises(ValidationError) as excinfo:
        check_rational_parameters({"B": "two fifths"})
    assert "B" in excinfo.value.message
