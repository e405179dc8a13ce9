import math

import numpy as np
import pytest

from app.core.exceptions import ValidationError
from app.services.cartan import (
    cartan_eigenvalues,
    cartan_matrix,
    direct_sum_invertible,
    numeric_cartan_eigenvalues,
    source_formula_eigenvalues,
    verify_cartan_spectrum,
)


def test_cartan_matrix_shape():
    assert cartan_matrix(3).tolist() == [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    assert cartan_matrix(1).tolist() == [[2]]


def test_two_by_two_spectrum():
    assert cartan_eigenvalues(2) == pytest.approx([1.0, 3.0])


@pytest.mark.parametrize("k", range(1, 13))
def test_closed_form_matches_eigensolve(k):
    report = verify_cartan_spectrum(k)
    assert report["agrees"]
    assert report["max_deviation"] <= 1e-10
    assert numeric_cartan_eigenvalues(k) == pytest.approx(sorted(np.linalg.eigvalsh(cartan_matrix(k))))


def test_sign_flipped_variant_is_not_the_spectrum():
    report = verify_cartan_spectrum(3)
    assert not report["source_formula_matches"]
    assert all(value < 0 for value in source_formula_eigenvalues(3))


def test_determinant_is_k_plus_one():
    for k in range(1, 7):
        assert math.prod(cartan_eigenvalues(k)) == pytest.approx(k + 1)
        assert direct_sum_invertible(k)


def test_rejects_empty_matrix():
    with pytest.raises(ValidationError):
        cartan_matrix(0)
