"""
Parameter objects for the circle configuration L_{k,B} on the unit-area sphere

A configuration is k level circles of the moment map z, cutting the sphere into
two caps of area B and k-1 annuli of area C, stabilised by the equator of a
second sphere of area 2a.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from ..core.constants import EQUATOR_B, Z_MIN
from ..core.exceptions import ValidationError
from ..utils.logging_utils import get_logger
from ..utils.rational_utils import format_rational, parse_rational

logger = get_logger(__name__)


@dataclass(frozen=True)
class LinkConfig:
    """Parameters (k, B, C, a) of L_{k,B}; C is None for the equator (k = 1)"""
    k: int
    B: Fraction
    C: Optional[Fraction]
    a: Fraction

    def __post_init__(self):
        k, B, C, a = self.k, self.B, self.C, self.a
        if k < 1:
            raise ValidationError("k must be at least 1", {"k": k})
        if k == 1:
            if B != EQUATOR_B:
                raise ValidationError("k = 1 requires B = 1/2", {"B": format_rational(B)})
            if C is not None:
                raise ValidationError("k = 1 has no annulus parameter C")
        else:
            if C is None:
                raise ValidationError("k >= 2 requires C")
            if 2 * B + (k - 1) * C != 1:
                raise ValidationError(
                    "2B + (k-1)C = 1 violated",
                    {"B": format_rational(B), "C": format_rational(C), "k": k},
                )
            if not C > 0:
                raise ValidationError("0 < C violated", {"C": format_rational(C)})
            if not C < B:
                raise ValidationError("C < B violated", {"B": format_rational(B), "C": format_rational(C)})
        if not a > 0:
            raise ValidationError("0 < a violated", {"a": format_rational(a)})
        if not a < B - self.c_or_zero:
            raise ValidationError(
                "a < B - C violated",
                {"a": format_rational(a), "B - C": format_rational(B - self.c_or_zero)},
            )

    @property
    def c_or_zero(self) -> Fraction:
        """C, or 0 for the equator configuration"""
        return self.C if self.C is not None else Fraction(0)

    def to_json(self) -> Dict[str, Any]:
        """Serialise as {"k":2,"B":"2/5","C":"1/5","a":"1/10"}"""
        data: Dict[str, Any] = {"k": self.k, "B": format_rational(self.B)}
        if self.C is not None:
            data["C"] = format_rational(self.C)
        data["a"] = format_rational(self.a)
        return data

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "LinkConfig":
        """Inverse of to_json; C is recomputed and cross-checked"""
        config = make_config(int(data["k"]), parse_rational(data["B"]), parse_rational(data["a"]))
        if "C" in data and config.C != parse_rational(data["C"]):
            raise ValidationError("C inconsistent with 2B + (k-1)C = 1", {"C": data["C"]})
        return config


@dataclass(frozen=True)
class LevelMeasure:
    """Uniform probability measure on the k level values z_j"""
    atoms: Tuple[Fraction, ...]

    @property
    def weight(self) -> Fraction:
        return Fraction(1, len(self.atoms))


@dataclass(frozen=True)
class WeightedTree:
    """Adjacency graph of the complement components, weighted by area"""
    edges: Tuple[Tuple[int, int], ...]
    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.weights)
        if n == 0:
            raise ValidationError("tree needs at least one vertex")
        if any(w <= 0 for w in self.weights):
            raise ValidationError("vertex weights must be positive")
        if sum(self.weights) != 1:
            raise ValidationError("vertex weights must sum to 1", {"sum": format_rational(sum(self.weights))})
        if len(self.edges) != n - 1:
            raise ValidationError("a tree on n vertices has n-1 edges", {"vertices": n, "edges": len(self.edges)})
        adjacency = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            for neighbour in adjacency[stack.pop()]:
                if neighbour not in seen:
                    seen.add(neighbour)
                    stack.append(neighbour)
        if len(seen) != n:
            raise ValidationError("graph is not connected")

    def adjacency(self) -> List[List[int]]:
        adjacency: List[List[int]] = [[] for _ in self.weights]
        for u, v in self.edges:
            if not (0 <= u < len(self.weights) and 0 <= v < len(self.weights)) or u == v:
                raise ValidationError("edge endpoints must be distinct vertices", {"edge": [u, v]})
            adjacency[u].append(v)
            adjacency[v].append(u)
        return adjacency

    def is_chain(self) -> bool:
        """True when the tree is a path"""
        return all(len(neighbours) <= 2 for neighbours in self.adjacency())


def make_config(k: int, B: Fraction, a: Fraction) -> LinkConfig:
    """
    Build and validate a configuration, computing C = (1-2B)/(k-1)

    Args:
        k: Number of circles
        B: Cap area
        a: Half the area of the stabilising sphere

    Returns:
        LinkConfig

    Raises:
        ValidationError: naming the violated inequality
    """
    B, a = Fraction(B), Fraction(a)
    if k < 1:
        raise ValidationError("k must be at least 1", {"k": k})
    C = None if k == 1 else (1 - 2 * B) / (k - 1)
    return LinkConfig(k, B, C, a)


def max_a(k: int, B: Fraction) -> Fraction:
    """Supremum of admissible a: ((k+1)B - 1)/(k - 1), or 1/2 for the equator"""
    if k == 1:
        return EQUATOR_B
    return ((k + 1) * Fraction(B) - 1) / (k - 1)


def levels(c: LinkConfig) -> LevelMeasure:
    """Level values z_j = -1/2 + B + (j-1)C, j = 1..k"""
    return LevelMeasure(tuple(Z_MIN + c.B + j * c.c_or_zero for j in range(c.k)))


def make_levels(k: int, B: Fraction) -> LevelMeasure:
    """
    Levels of L_{k,B} without the stabilising parameter a

    Raises:
        ValidationError: k = 1 with B != 1/2, or 0 < C < B violated
    """
    B = Fraction(B)
    if k < 1:
        raise ValidationError("k must be at least 1", {"k": k})
    if k == 1:
        if B != EQUATOR_B:
            raise ValidationError("k = 1 requires B = 1/2", {"B": format_rational(B)})
        return LevelMeasure((Fraction(0),))
    C = (1 - 2 * B) / (k - 1)
    if not 0 < C < B:
        raise ValidationError(
            "0 < C < B violated",
            {"k": k, "B": format_rational(B), "C": format_rational(C)},
        )
    return LevelMeasure(tuple(Z_MIN + B + j * C for j in range(k)))


def complement_tree(c: LinkConfig) -> WeightedTree:
    """Cap, k-1 annuli, cap: the linear chain of complement components"""
    weights = (c.B,) + (c.c_or_zero,) * (c.k - 1) + (c.B,)
    edges = tuple((i, i + 1) for i in range(c.k))
    return WeightedTree(edges, weights)


def linear_matching_property(k: int, B: Fraction, C: Fraction) -> bool:
    """
    Matching property of the linear chain: holds iff B > C

    Raises:
        ValidationError: (k, B, C) inconsistent with 2B + (k-1)C = 1 or non-positive
    """
    B, C = Fraction(B), Fraction(C)
    if k < 1 or B <= 0 or C <= 0:
        raise ValidationError("matching criterion needs k >= 1 and B, C > 0")
    if 2 * B + (k - 1) * C != 1:
        raise ValidationError(
            "2B + (k-1)C = 1 violated",
            {"k": k, "B": format_rational(B), "C": format_rational(C)},
        )
    return B > C


def tree_matching_property(tree: WeightedTree) -> bool:
    """
    Matching property for chain-shaped trees (end caps B, interior C)

    Raises:
        ValidationError: the tree is not a chain with equal interior weights
    """
    if not tree.is_chain():
        raise ValidationError("matching property is only decided for linear chains")
    n = len(tree.weights)
    if n < 3:
        raise ValidationError("a chain configuration has at least two caps and one circle between them")
    order = _chain_order(tree)
    weights = [tree.weights[v] for v in order]
    ends, interior = weights[0], weights[1:-1]
    if weights[-1] != ends or len(set(interior)) > 1:
        raise ValidationError("only symmetric chains with equal annuli are decided")
    k = n - 1
    if k == 1:
        return True
    return linear_matching_property(k, ends, interior[0])


def _chain_order(tree: WeightedTree) -> Sequence[int]:
    adjacency = tree.adjacency()
    start = next(v for v, neighbours in enumerate(adjacency) if len(neighbours) <= 1)
    order = [start]
    previous = None
    while len(order) < len(tree.weights):
        current = order[-1]
        following = [v for v in adjacency[current] if v != previous]
        previous = current
        order.append(following[0])
    return order


def check_rational_parameters(values: Mapping[str, Any]) -> Dict[str, Fraction]:
    """Parse named rational inputs, reporting the offending name on failure"""
    parsed = {}
    for name, value in values.items():
        try:
            parsed[name] = parse_rational(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"parameter {name} is not a rational", {"value": str(value)}) from exc
    return parsed
