"""
Non-resonance condition on circle radii r_i, rho_i

Holds when r_i/r_j < rho_i/rho_j for all i < j and no non-zero integer
vectors (alpha, beta) with bounded entries satisfy sum alpha_i r_i = sum beta_i rho_i.
"""

import itertools
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from ..core.config import settings
from ..core.constants import EXHAUSTIVE_RELATION_MAX_K, PSLQ_WORKING_DPS
from ..core.exceptions import ValidationError
from ..utils.logging_utils import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class NonResonanceReport:
    """Outcome of check_nonresonance with the first violation found"""
    holds: bool
    ratio_condition: bool
    ratio_violation: Optional[Tuple[int, int]]
    relation: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]
    method: str

    def to_json(self) -> Dict[str, Any]:
        return {
            "holds": self.holds,
            "method": self.method,
            "ratio_condition": self.ratio_condition,
            "ratio_violation": list(self.ratio_violation) if self.ratio_violation else None,
            "relation": {"alpha": list(self.relation[0]), "beta": list(self.relation[1])} if self.relation else None,
        }


def _ratio_violation(r: Sequence[float], rho: Sequence[float]) -> Optional[Tuple[int, int]]:
    for i, j in itertools.combinations(range(len(r)), 2):
        if not r[i] / r[j] < rho[i] / rho[j]:
            return i, j
    return None


def _combinations(values: Sequence[float], bound: int) -> Tuple[np.ndarray, np.ndarray]:
    """All sums sum c_i v_i with |c_i| <= bound, and the coefficient vectors"""
    axis = np.arange(-bound, bound + 1)
    grids = np.meshgrid(*([axis] * len(values)), indexing="ij")
    vectors = np.stack([g.ravel() for g in grids], axis=1)
    return vectors @ np.asarray(values, dtype=float), vectors


def exhaustive_relation(r: Sequence[float], rho: Sequence[float], coeff_bound: int,
                        tolerance: float) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """
    Meet-in-the-middle search for sum alpha_i r_i = sum beta_i rho_i

    Sorts the rho-side sums and binary-searches every r-side sum; the single
    pairing of two zero vectors is excluded.
    """
    left, alphas = _combinations(r, coeff_bound)
    right, betas = _combinations(rho, coeff_bound)
    order = np.argsort(right, kind="stable")
    right_sorted = right[order]
    lo = np.searchsorted(right_sorted, left - tolerance, side="left")
    hi = np.searchsorted(right_sorted, left + tolerance, side="right")
    counts = hi - lo

    zero_alpha = int(np.flatnonzero(~alphas.any(axis=1))[0])
    zero_beta_position = int(np.flatnonzero(~betas[order].any(axis=1))[0])
    if lo[zero_alpha] <= zero_beta_position < hi[zero_alpha]:
        counts[zero_alpha] -= 1

    hits = np.flatnonzero(counts > 0)
    if hits.size == 0:
        return None
    i = int(hits[0])
    for position in range(lo[i], hi[i]):
        j = int(order[position])
        if i == zero_alpha and not betas[j].any():
            continue
        return tuple(int(v) for v in alphas[i]), tuple(int(v) for v in betas[j])
    return None


def pslq_relation(r: Sequence[float], rho: Sequence[float], coeff_bound: int,
                  tolerance: float) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Integer relation among (r, -rho) by PSLQ, accepted only within coeff_bound"""
    with mpmath.workdps(PSLQ_WORKING_DPS):
        vector = [mpmath.mpf(v) for v in r] + [-mpmath.mpf(v) for v in rho]
        relation = mpmath.pslq(vector, tol=mpmath.mpf(tolerance), maxcoeff=coeff_bound, maxsteps=10**5)
    if relation is None or max(abs(c) for c in relation) > coeff_bound:
        return None
    k = len(r)
    return tuple(int(c) for c in relation[:k]), tuple(int(c) for c in relation[k:])


def check_nonresonance(r: Sequence[float], rho: Sequence[float], coeff_bound: int,
                       tolerance: Optional[float] = None) -> NonResonanceReport:
    """
    Decide the non-resonance condition up to a coefficient bound

    Args:
        r: Radii of the first factor circles
        rho: Radii of the second factor circles
        coeff_bound: Largest absolute value of an integer coefficient
        tolerance: Relation tolerance (default settings.relation_tolerance)

    Returns:
        NonResonanceReport; holds is the boolean answer
    """
    if len(r) != len(rho) or not r:
        raise ValidationError("r and rho must be non-empty and of equal length", {"r": len(r), "rho": len(rho)})
    if any(v <= 0 for v in list(r) + list(rho)):
        raise ValidationError("radii must be positive")
    if coeff_bound < 1:
        raise ValidationError("coefficient bound must be at least 1", {"coeff_bound": coeff_bound})
    tolerance = settings.relation_tolerance if tolerance is None else tolerance

    violation = _ratio_violation(r, rho)
    if len(r) <= EXHAUSTIVE_RELATION_MAX_K:
        method = "exhaustive"
        relation = exhaustive_relation(r, rho, coeff_bound, tolerance)
    else:
        method = "pslq"
        relation = pslq_relation(r, rho, coeff_bound, tolerance)
    logger.debug(f"Non-resonance via {method}: ratio violation {violation}, relation {relation}")
    return NonResonanceReport(
        holds=violation is None and relation is None,
        ratio_condition=violation is None,
        ratio_violation=violation,
        relation=relation,
        method=method,
    )


def relation_residual(r: Sequence[float], rho: Sequence[float], relation: Tuple[Sequence[int], Sequence[int]]) -> float:
    """|sum alpha_i r_i - sum beta_i rho_i| for a reported relation"""
    alpha, beta = relation
    return abs(sum(a * x for a, x in zip(alpha, r)) - sum(b * y for b, y in zip(beta, rho)))


def radii_from_strings(values: List[str]) -> List[float]:
    """Parse radii such as "1", "sqrt(2)" or "1.5" through mpmath"""
    parsed = []
    for value in values:
        text = value.strip()
        try:
            if text.startswith("sqrt(") and text.endswith(")"):
                parsed.append(float(mpmath.sqrt(mpmath.mpf(text[5:-1]))))
            else:
                parsed.append(float(mpmath.mpf(text)))
        except (ValueError, TypeError) as exc:
            raise ValidationError("cannot parse radius", {"value": value}) from exc
    return parsed
