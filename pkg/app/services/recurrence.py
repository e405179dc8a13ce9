"""
Translation-invariant red/blue colorings of Z>=0 and recurrence densities

Edge (i, j) is red iff |i - j| lies in the difference set D. A red clique on
k+1 vertices certifies a (k+1)-packing, so the colorings of interest are the
clique-free ones, and the recurrence set is the blue neighbourhood of 0.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from ..core.config import settings
from ..core.exceptions import NumericalError, ValidationError
from ..utils.logging_utils import get_logger
from ..utils.pool_utils import parallel_map

logger = get_logger(__name__)


@dataclass(frozen=True)
class DifferenceSet:
    """Red differences D within the window [1, N]"""
    D: FrozenSet[int]
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValidationError("window must be at least 1", {"N": self.N})
        outside = sorted(d for d in self.D if not 1 <= d <= self.N)
        if outside:
            raise ValidationError("differences must lie in [1, N]", {"N": self.N, "outside": outside})

    @classmethod
    def of(cls, D: Iterable[int], N: int) -> "DifferenceSet":
        return cls(frozenset(int(d) for d in D), int(N))

    def color(self, i: int, j: int) -> str:
        """"red" or "blue"; translation invariant by construction"""
        if i == j:
            raise ValidationError("no loops in the coloring")
        return "red" if abs(i - j) in self.D else "blue"

    def to_json(self) -> Dict[str, Any]:
        return {"D": sorted(self.D), "N": self.N}


@dataclass(frozen=True)
class RotationModel:
    """Lambda = [0, r) under x -> x + alpha mod 1"""
    alpha: float
    r: float

    def __post_init__(self):
        if not 0 < self.r < 1:
            raise ValidationError("r must lie in (0, 1)", {"r": self.r})


# ============================================================================
# CLIQUES
# ============================================================================

def _extend(clique: List[int], candidates: Sequence[int], D: Set[int], size: int) -> bool:
    if len(clique) == size:
        return True
    for index, v in enumerate(candidates):
        if all(v - u in D for u in clique):
            clique.append(v)
            if _extend(clique, candidates[index + 1:], D, size):
                return True
            clique.pop()
    return False


def has_delta_clique(d: DifferenceSet, size: int) -> bool:
    """
    Vertices v_1 < ... < v_size in [0, N] with all pairwise differences in D

    By translation invariance the search fixes v_1 = 0.
    """
    if size < 2:
        raise ValidationError("clique size must be at least 2", {"size": size})
    return _extend([0], sorted(d.D), set(d.D), size)


def _max_clique(D: Set[int], limit: int) -> Tuple[int, ...]:
    """Lexicographically smallest maximum clique containing 0 inside [0, limit]"""
    candidates = sorted(v for v in D if v <= limit)
    best: List[Tuple[int, ...]] = [(0,)]

    def search(clique: List[int], remaining: Sequence[int]):
        if len(clique) > len(best[0]):
            best[0] = tuple(clique)
        for index, v in enumerate(remaining):
            if len(clique) + len(remaining) - index <= len(best[0]):
                return
            if all(v - u in D for u in clique):
                clique.append(v)
                search(clique, remaining[index + 1:])
                clique.pop()

    search([0], candidates)
    return best[0]


def max_delta_clique(d: DifferenceSet, limit: Optional[int] = None) -> Tuple[int, ...]:
    """Lexicographically smallest maximum Delta-clique containing 0 (vertices <= limit, default N)"""
    return _max_clique(set(d.D), d.N if limit is None else limit)


def schur_free(D: Iterable[int]) -> bool:
    """No x, y, x + y in D (x = y allowed)"""
    values = set(D)
    return not any(x + y in values for x in values for y in values if x <= y)


# ============================================================================
# RECURRENCE
# ============================================================================

def recurrence_set(d: DifferenceSet) -> FrozenSet[int]:
    """{n in [1, N] : n not in D}, the blue neighbours of 0"""
    return frozenset(n for n in range(1, d.N + 1) if n not in d.D)


def density_bound_check(d: DifferenceSet, k: int, m: int) -> Dict[str, Any]:
    """
    |R cap [1, mk]| >= m - q for a maximal red clique Q in [0, mk] with max q

    Some vertex of Q has blue degree >= m in [0, mk]; at most q of its blue
    neighbours lie below it, and the rest give distinct recurrence times.
    Precondition failures are reported, not raised.
    """
    failures = []
    if k < 1 or m < 1:
        failures.append("k and m must be at least 1")
    if d.N < m * k:
        failures.append("window N must be at least mk")
    clique_free = not has_delta_clique(d, k + 1) if k >= 1 else False
    if not clique_free:
        failures.append("D has a clique of size k+1")
    window = min(m * k, d.N)
    clique = _max_clique(set(d.D), window)
    q = max(clique)
    count = sum(1 for n in range(1, window + 1) if n not in d.D)
    report = {
        "k": k,
        "m": m,
        "clique": list(clique),
        "q": q,
        "count": count,
        "bound": m - q,
        "margin": count - (m - q),
        "preconditions_hold": not failures,
        "failures": failures,
    }
    report["holds"] = not failures and count >= m - q
    return report


def subset_recurrence_check(d: DifferenceSet, A: Iterable[int], k: int) -> Dict[str, Any]:
    """
    Some p in A sees at least (|A| - k)/k elements of A at recurrence distances

    Every vertex outside a maximal red clique Q (|Q| <= k) of A has a blue edge
    into Q, so the best vertex of Q has blue degree >= (|A| - |Q|)/|Q|.
    """
    vertices = sorted(set(int(a) for a in A))
    if not vertices:
        raise ValidationError("A must be non-empty")
    if vertices[0] < 0 or vertices[-1] - vertices[0] > d.N:
        raise ValidationError("A must fit in a window of length N", {"N": d.N})
    degrees = [
        sum(1 for a in vertices if a != p and abs(a - p) not in d.D)
        for p in vertices
    ]
    best = int(np.argmax(degrees))
    bound = Fraction(len(vertices) - k, k)
    clique_free = not has_delta_clique(d, k + 1)
    return {
        "size": len(vertices),
        "k": k,
        "vertex": vertices[best],
        "blue_degree": degrees[best],
        "bound": bound,
        "clique_free": clique_free,
        "holds": degrees[best] >= bound if clique_free else None,
    }


# ============================================================================
# EXHAUSTIVE ENUMERATION
# ============================================================================

def _closes_clique(D: Set[int], x: int, k: int) -> bool:
    """Adding x above every element of D creates a red (k+1)-clique spanning [0, x]"""
    if k == 1:
        return True
    middle = [v for v in sorted(D) if x - v in D]
    return _extend([], middle, D, k - 1)


@dataclass
class _BranchStats:
    instances: int = 0
    best: Tuple[int, ...] = ()
    bound_failures: List[Tuple[int, ...]] = field(default_factory=list)

    def visit(self, D: Tuple[int, ...], N: int, k: int):
        self.instances += 1
        if len(D) > len(self.best) or (len(D) == len(self.best) and D < self.best):
            self.best = D
        m = N // k
        check = density_bound_check(DifferenceSet.of(D, N), k, m)
        if not check["holds"]:
            self.bound_failures.append(D)


def _enumerate_branch(job: Tuple[Optional[int], int, int]) -> _BranchStats:
    first, N, k = job
    stats = _BranchStats()
    if first is None:
        stats.visit((), N, k)
        return stats

    def search(D: List[int], members: Set[int]):
        stats.visit(tuple(D), N, k)
        for x in range(D[-1] + 1, N + 1):
            if not _closes_clique(members, x, k):
                D.append(x)
                members.add(x)
                search(D, members)
                members.discard(x)
                D.pop()

    if not _closes_clique(set(), first, k):
        search([first], {first})
    return stats


@dataclass(frozen=True)
class EnumerationResult:
    """Minimum recurrence density over all clique-free D in a window"""
    k: int
    N: int
    min_density: Fraction
    witness: DifferenceSet
    instances: int
    bound_failures: int

    @property
    def floor(self) -> Fraction:
        return Fraction(1, self.k) - Fraction(self.k, self.N)

    @property
    def deficit_constant(self) -> Fraction:
        """(1/k - min_density) * N, clipped at 0"""
        return max(Fraction(0), (Fraction(1, self.k) - self.min_density) * self.N)

    def to_json(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "N": self.N,
            "min_density": self.min_density,
            "witness": sorted(self.witness.D),
            "clique_certificate": list(max_delta_clique(self.witness)),
            "instances": self.instances,
            "bound_failures": self.bound_failures,
            "floor": self.floor,
            "deficit_constant": self.deficit_constant,
        }


def enumerate_and_verify(k: int, N: int, workers: Optional[int] = None) -> EnumerationResult:
    """
    Exhaust every D in [1, N] without a red (k+1)-clique

    Branches on the smallest element of D across the worker pool and merges by
    min-reduction on the complement density (ties go to the lexicographically
    smallest witness). The m - q bound is checked on every instance with
    m = N // k.

    Raises:
        ValidationError: N above settings.max_window, or k, N < 1
        NumericalError: min density below 1/k - k/N, or an m - q bound failure
    """
    if k < 1 or N < 1:
        raise ValidationError("k and N must be at least 1", {"k": k, "N": N})
    if N > settings.max_window:
        raise ValidationError("window too large for exhaustive enumeration",
                              {"N": N, "max_window": settings.max_window})
    jobs: List[Tuple[Optional[int], int, int]] = [(None, N, k)] + [(x, N, k) for x in range(1, N + 1)]
    branches = parallel_map(_enumerate_branch, jobs, workers)

    best: Tuple[int, ...] = ()
    instances = 0
    failures = 0
    for stats in branches:
        instances += stats.instances
        failures += len(stats.bound_failures)
        if len(stats.best) > len(best) or (len(stats.best) == len(best) and stats.best < best):
            best = stats.best
    result = EnumerationResult(
        k=k,
        N=N,
        min_density=Fraction(N - len(best), N),
        witness=DifferenceSet.of(best, N),
        instances=instances,
        bound_failures=failures,
    )
    logger.info(f"Enumerated {instances} clique-free sets for k={k}, N={N}: min density {result.min_density}")
    if failures:
        raise NumericalError("m - q bound failed on enumerated instances", {"failures": failures})
    if result.min_density < result.floor:
        raise NumericalError(
            "recurrence density below 1/k - k/N",
            {"min_density": str(result.min_density), "floor": str(result.floor)},
        )
    return result


# ============================================================================
# ROTATION ORACLE
# ============================================================================

def rotation_densities(model: RotationModel, N: int) -> Dict[str, Any]:
    """
    Density of R = {n <= N : ||n alpha|| < r} and k = floor(1/r)

    Returns:
        {density, k, expected (2r capped at 1), floor (1/k - k/N), holds}
    """
    if N < 1:
        raise ValidationError("N must be at least 1", {"N": N})
    n = np.arange(1, N + 1, dtype=float)
    fractional = np.mod(n * model.alpha, 1.0)
    distance = np.minimum(fractional, 1.0 - fractional)
    density = float(np.count_nonzero(distance < model.r)) / N
    k = math.floor(1 / model.r)
    floor = 1 / k - k / N
    return {
        "alpha": model.alpha,
        "r": model.r,
        "N": N,
        "density": density,
        "k": k,
        "expected": min(1.0, 2 * model.r),
        "floor": floor,
        "holds": density >= floor,
    }
