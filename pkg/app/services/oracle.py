"""
Numerical critical points of W at a fixed value T = t

Independent check of the series solver: W becomes an ordinary Laurent
polynomial on (C^*)^{2k} and damped Newton runs in logarithmic coordinates.
"""

from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from tenacity import RetryCallState, Retrying, retry_if_exception_type, stop_after_attempt

from ..core.config import settings
from ..core.constants import NEWTON_DAMPING_SCHEDULE, NEWTON_MIN_STEP
from ..core.exceptions import OracleDivergenceError, ValidationError
from ..utils.logging_utils import get_logger
from .laurent import numeric_arrays
from .superpotential import CriticalPoint, SuperpotentialData, evaluate_series_point, leading_solution

logger = get_logger(__name__)


def _log_retry(retry_state: RetryCallState):
    logger.warning(
        f"Newton attempt {retry_state.attempt_number} diverged; "
        f"retrying with damping {NEWTON_DAMPING_SCHEDULE[min(retry_state.attempt_number, len(NEWTON_DAMPING_SCHEDULE) - 1)]}"
    )


def gradient_norm(exponents: np.ndarray, coefficients: np.ndarray, z: np.ndarray) -> float:
    """Euclidean norm of dW/dz at z"""
    values = coefficients * np.prod(z[np.newaxis, :] ** exponents, axis=1)
    return float(np.linalg.norm((exponents.T @ values) / z))


def _newton(exponents: np.ndarray, coefficients: np.ndarray, start: np.ndarray, damping: float) -> np.ndarray:
    u = np.log(start.astype(complex))
    for iteration in range(settings.newton_max_iterations):
        z = np.exp(u)
        values = coefficients * np.exp(exponents @ u)
        log_gradient = exponents.T @ values
        if float(np.linalg.norm(log_gradient / z)) < settings.newton_tolerance:
            logger.debug(f"Newton converged after {iteration} iterations (damping {damping})")
            return z
        hessian = exponents.T @ (values[:, np.newaxis] * exponents)
        try:
            step = np.linalg.solve(hessian, -log_gradient)
        except np.linalg.LinAlgError as exc:
            raise OracleDivergenceError("singular Hessian in Newton iteration") from exc
        if not np.all(np.isfinite(step)):
            raise OracleDivergenceError("non-finite Newton step")
        u = u + damping * step
        if float(np.linalg.norm(step)) < NEWTON_MIN_STEP and \
                gradient_norm(exponents, coefficients, np.exp(u)) >= settings.newton_tolerance:
            raise OracleDivergenceError("Newton stalled above tolerance")
        damping = min(1.0, 2 * damping)
    z = np.exp(u)
    if gradient_norm(exponents, coefficients, z) < settings.newton_tolerance:
        return z
    raise OracleDivergenceError(
        "Newton did not converge",
        {"iterations": settings.newton_max_iterations, "gradient_norm": gradient_norm(exponents, coefficients, z)},
    )


def solve_numeric_oracle(S: SuperpotentialData, t: float, start: Optional[CriticalPoint] = None,
                         seed: Optional[Sequence[complex]] = None) -> List[complex]:
    """
    Numerical critical point of W with T = t

    Args:
        S: Superpotential data
        t: Value substituted for T, in (0, 1)
        start: Series point evaluated at t as the initial guess (default: the default leading branch)
        seed: Explicit initial coordinates; takes precedence over start

    Returns:
        2k complex coordinates p_0..p_{k-1}, q_0..q_{k-1} with |grad W| < newton_tolerance

    Raises:
        OracleDivergenceError: every damping in the schedule failed
    """
    if not 0 < t < 1:
        raise ValidationError("t must lie in (0, 1)", {"t": t})
    if seed is not None:
        initial = np.array(list(seed), dtype=complex)
    elif start is None:
        start = leading_solution(S.config, S.signs, orbifold_weight=S.orbifold_weight)
        initial = np.array(start.leading_values(), dtype=complex)
    else:
        initial = np.array(evaluate_series_point(start, t), dtype=complex)
    if initial.shape != (2 * S.k,):
        raise ValidationError("initial guess needs 2k coordinates", {"k": S.k, "given": int(initial.size)})
    exponents, coefficients = numeric_arrays(S.W, t)

    for attempt in Retrying(
        stop=stop_after_attempt(len(NEWTON_DAMPING_SCHEDULE)),
        retry=retry_if_exception_type(OracleDivergenceError),
        before_sleep=_log_retry,
        reraise=True,
    ):
        with attempt:
            damping = NEWTON_DAMPING_SCHEDULE[attempt.retry_state.attempt_number - 1]
            z = _newton(exponents, coefficients, initial, damping)
    return [complex(v) for v in z]


def oracle_comparison(S: SuperpotentialData, point: CriticalPoint, ts: Sequence[float]) -> Dict[str, Any]:
    """
    Compare a series solution with the Newton oracle at several t

    The oracle never sees the refined series: the smallest t starts from the
    leading coefficients of point, and each larger t starts from the oracle
    solution at the previous one.

    Returns:
        Rows {t, max_abs_diff, t_pow_g} in the order of ts, plus the error ratio
        between the first two t values (expected to exceed 5 once g_max is large enough)
    """
    oracle_at: Dict[float, List[complex]] = {}
    previous: Sequence[complex] = point.leading_values()
    for t in sorted(set(ts)):
        previous = oracle_at[t] = solve_numeric_oracle(S, t, seed=previous)

    rows = []
    for t in ts:
        series = evaluate_series_point(point, t)
        difference = max(abs(x - y) for x, y in zip(oracle_at[t], series))
        rows.append({"t": t, "max_abs_diff": difference, "t_pow_g": t ** float(point.solved_order)})
    ratio = None
    if len(rows) >= 2 and rows[1]["max_abs_diff"] > 0:
        ratio = rows[0]["max_abs_diff"] / rows[1]["max_abs_diff"]
    return {"rows": rows, "error_ratio": ratio}
