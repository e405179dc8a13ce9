"""
A_k Cartan matrix and its spectrum
"""

import math
from typing import Any, Dict, List

import numpy as np
from scipy import sparse
from scipy.linalg import eigvalsh_tridiagonal

from ..core.constants import ORACLE_AGREEMENT_TOLERANCE
from ..core.exceptions import ValidationError
from ..utils.logging_utils import get_logger

logger = get_logger(__name__)


def cartan_matrix(k: int) -> np.ndarray:
    """Tridiagonal k x k integer matrix with 2 on the diagonal and -1 beside it"""
    if k < 1:
        raise ValidationError("Cartan matrix needs k >= 1", {"k": k})
    if k == 1:
        return np.array([[2]])
    return sparse.diags(
        [-np.ones(k - 1), 2 * np.ones(k), -np.ones(k - 1)], [-1, 0, 1], shape=(k, k), dtype=int
    ).toarray()


def cartan_eigenvalues(k: int) -> List[float]:
    """Closed form 2 - 2cos(j*pi/(k+1)), j = 1..k, ascending"""
    if k < 1:
        raise ValidationError("Cartan matrix needs k >= 1", {"k": k})
    return [2 - 2 * math.cos(j * math.pi / (k + 1)) for j in range(1, k + 1)]


def source_formula_eigenvalues(k: int) -> List[float]:
    """Sign-flipped variant -2(1 + cos(j*pi/(k+1))); negative, so never the spectrum of A_k"""
    return sorted(-2 * (1 + math.cos(j * math.pi / (k + 1))) for j in range(1, k + 1))


def numeric_cartan_eigenvalues(k: int) -> List[float]:
    """Direct symmetric tridiagonal eigensolve"""
    if k < 1:
        raise ValidationError("Cartan matrix needs k >= 1", {"k": k})
    if k == 1:
        return [2.0]
    return [float(v) for v in eigvalsh_tridiagonal(2.0 * np.ones(k), -np.ones(k - 1))]


def verify_cartan_spectrum(k: int) -> Dict[str, Any]:
    """
    Compare the closed form with a numeric eigensolve and check the sign-flipped variant

    Returns:
        Dict with both spectra, the maximum deviation, whether it is below
        1e-10, and whether the -2(1 + cos) variant matches
    """
    closed = cartan_eigenvalues(k)
    numeric = numeric_cartan_eigenvalues(k)
    deviation = max(abs(a - b) for a, b in zip(closed, numeric))
    variant = source_formula_eigenvalues(k)
    variant_matches = max(abs(a - b) for a, b in zip(variant, numeric)) <= ORACLE_AGREEMENT_TOLERANCE
    if not variant_matches:
        logger.warning(
            f"Eigenvalue formula -2(1+cos(j*pi/{k + 1})) disagrees with the A_{k} spectrum; "
            f"reporting 2-2cos(j*pi/{k + 1})"
        )
    return {
        "k": k,
        "eigenvalues": closed,
        "numeric_eigenvalues": numeric,
        "max_deviation": deviation,
        "agrees": deviation <= ORACLE_AGREEMENT_TOLERANCE,
        "source_formula_matches": variant_matches,
    }


def direct_sum_invertible(k: int) -> bool:
    """2*Id_k (+) A_k is invertible (its determinant is 2^k (k+1))"""
    block = np.zeros((2 * k, 2 * k))
    block[:k, :k] = 2 * np.eye(k)
    block[k:, k:] = cartan_matrix(k)
    return abs(np.linalg.det(block)) > ORACLE_AGREEMENT_TOLERANCE
