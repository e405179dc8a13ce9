"""
Piecewise-polynomial functions of the moment map z and of time

Radial Hamiltonians H = h o z are represented by their profile h on
[-1/2, 1/2]. Each piece stores ascending coefficients in the local variable
x - left, so rational coefficients stay exact through evaluation,
integration and reflection.
"""

import bisect
import random
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.config import settings
from ..core.constants import Z_MAX, Z_MIN
from ..core.exceptions import ValidationError
from ..utils.logging_utils import get_logger
from ..utils.rational_utils import format_rational, parse_rational

logger = get_logger(__name__)

Coefficient = Union[Fraction, float]
Coefficients = Tuple[Coefficient, ...]

CONTINUITY_TOLERANCE = 1e-9


# ============================================================================
# POLYNOMIAL HELPERS
# ============================================================================

def _is_zero(c: Coefficient) -> bool:
    if isinstance(c, Fraction):
        return c == 0
    return abs(c) <= settings.zero_tolerance


def _trim(coefficients: Sequence[Coefficient]) -> Coefficients:
    trimmed = list(coefficients)
    while trimmed and _is_zero(trimmed[-1]):
        trimmed.pop()
    return tuple(trimmed)


def _horner(coefficients: Sequence[Coefficient], t: Coefficient) -> Coefficient:
    value: Coefficient = Fraction(0)
    for c in reversed(coefficients):
        value = value * t + c
    return value


def _taylor_shift(coefficients: Sequence[Coefficient], d: Coefficient) -> Coefficients:
    """Coefficients of p(t + d)"""
    shifted = list(coefficients)
    n = len(shifted)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            shifted[j] = shifted[j] + d * shifted[j + 1]
    return tuple(shifted)


def _reflect(coefficients: Sequence[Coefficient], scale: Coefficient) -> Coefficients:
    """Coefficients of p(scale * t)"""
    return tuple(c * scale ** i for i, c in enumerate(coefficients))


def _poly_add(p: Sequence[Coefficient], q: Sequence[Coefficient]) -> Coefficients:
    n = max(len(p), len(q))
    return tuple(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def _poly_mul(p: Sequence[Coefficient], q: Sequence[Coefficient]) -> Coefficients:
    if not p or not q:
        return ()
    product: List[Coefficient] = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            product[i + j] = product[i + j] + a * b
    return tuple(product)


def _antiderivative_at(coefficients: Sequence[Coefficient], t: Coefficient) -> Coefficient:
    return sum((c * t ** (i + 1) / (i + 1) for i, c in enumerate(coefficients)), Fraction(0))


def as_number(value: Union[str, Number]) -> Coefficient:
    """Exact Fraction when possible, float otherwise"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return value
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError("not a number", {"value": str(value)}) from exc


# ============================================================================
# PIECEWISE POLYNOMIALS
# ============================================================================

@dataclass(frozen=True)
class PiecewisePolynomial:
    """
    Piecewise polynomial on [breakpoints[0], breakpoints[-1]]

    Piece i lives on [breakpoints[i], breakpoints[i+1]] with ascending
    coefficients in x - breakpoints[i]. At an interior breakpoint the
    right-hand piece is used.
    """
    breakpoints: Tuple[Fraction, ...]
    pieces: Tuple[Coefficients, ...]

    def __post_init__(self):
        if len(self.breakpoints) < 2 or len(self.pieces) != len(self.breakpoints) - 1:
            raise ValidationError(
                "need n+1 breakpoints for n pieces",
                {"breakpoints": len(self.breakpoints), "pieces": len(self.pieces)},
            )
        if any(not isinstance(b, Fraction) for b in self.breakpoints):
            raise ValidationError("breakpoints must be rationals")
        if any(b >= c for b, c in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValidationError("breakpoints must be strictly increasing")

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------

    @property
    def domain(self) -> Tuple[Fraction, Fraction]:
        return self.breakpoints[0], self.breakpoints[-1]

    def _rebuild(self, breakpoints: Sequence[Fraction], pieces: Sequence[Sequence[Coefficient]]):
        return type(self)(tuple(breakpoints), tuple(_trim(p) for p in pieces))

    @classmethod
    def from_absolute(cls, breakpoints: Sequence[Fraction],
                      pieces: Sequence[Sequence[Coefficient]]):
        """Build from per-piece coefficients in the absolute variable x"""
        breakpoints = tuple(Fraction(b) for b in breakpoints)
        local = [_trim(_taylor_shift(p, left)) for p, left in zip(pieces, breakpoints)]
        return cls(breakpoints, tuple(local))

    @classmethod
    def constant_on(cls, lo: Fraction, hi: Fraction, value: Coefficient):
        return cls((Fraction(lo), Fraction(hi)), (_trim((value,)),))

    def _piece_index(self, x: Coefficient) -> int:
        lo, hi = self.domain
        if x < lo or x > hi:
            raise ValidationError(
                "point outside the domain",
                {"x": str(x), "domain": [format_rational(lo), format_rational(hi)]},
            )
        return min(bisect.bisect_right(self.breakpoints, x) - 1, len(self.pieces) - 1)

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------

    def __call__(self, x: Coefficient) -> Coefficient:
        i = self._piece_index(x)
        return _horner(self.pieces[i], x - self.breakpoints[i])

    def evaluate_array(self, xs: Union[Sequence[float], np.ndarray]) -> np.ndarray:
        """Vectorised float evaluation"""
        xs = np.asarray(xs, dtype=float)
        lo, hi = self.domain
        if xs.size and (xs.min() < float(lo) - 1e-15 or xs.max() > float(hi) + 1e-15):
            raise ValidationError("points outside the domain")
        bounds = np.array([float(b) for b in self.breakpoints])
        index = np.clip(np.searchsorted(bounds, xs, side="right") - 1, 0, len(self.pieces) - 1)
        degree = max((len(p) for p in self.pieces), default=0)
        table = np.zeros((len(self.pieces), max(degree, 1)))
        for i, piece in enumerate(self.pieces):
            table[i, :len(piece)] = [float(c) for c in piece]
        local = xs - bounds[index]
        values = table[index, -1]
        for d in range(table.shape[1] - 2, -1, -1):
            values = values * local + table[index, d]
        return values

    # ------------------------------------------------------------------
    # algebra
    # ------------------------------------------------------------------

    def _refined(self, breakpoints: Sequence[Fraction]) -> List[Coefficients]:
        refined = []
        for left in breakpoints[:-1]:
            i = self._piece_index(left)
            refined.append(_taylor_shift(self.pieces[i], left - self.breakpoints[i]))
        return refined

    def _combine(self, other: "PiecewisePolynomial",
                 op: Callable[[Coefficients, Coefficients], Coefficients]):
        if self.domain != other.domain:
            raise ValidationError("piecewise polynomials live on different domains")
        merged = sorted(set(self.breakpoints) | set(other.breakpoints))
        mine, theirs = self._refined(merged), other._refined(merged)
        return self._rebuild(merged, [op(p, q) for p, q in zip(mine, theirs)])

    def __add__(self, other: "PiecewisePolynomial"):
        return self._combine(other, _poly_add)

    def __sub__(self, other: "PiecewisePolynomial"):
        return self + other.scale(-1)

    def __mul__(self, other: "PiecewisePolynomial"):
        return self._combine(other, _poly_mul)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, factor: Coefficient):
        return self._rebuild(self.breakpoints, [tuple(c * factor for c in p) for p in self.pieces])

    def shift(self, value: Coefficient):
        """Add a constant"""
        return self._rebuild(self.breakpoints, [_poly_add(p, (value,)) for p in self.pieces])

    def derivative(self) -> "PiecewisePolynomial":
        return PiecewisePolynomial(
            self.breakpoints,
            tuple(_trim(tuple(i * c for i, c in enumerate(p))[1:]) for p in self.pieces),
        )

    def integral(self, lo: Optional[Fraction] = None, hi: Optional[Fraction] = None) -> Coefficient:
        """Exact integral over [lo, hi] (default the whole domain)"""
        d_lo, d_hi = self.domain
        lo = d_lo if lo is None else lo
        hi = d_hi if hi is None else hi
        if lo > hi:
            return -self.integral(hi, lo)
        total: Coefficient = Fraction(0)
        for i, piece in enumerate(self.pieces):
            left, right = self.breakpoints[i], self.breakpoints[i + 1]
            a, b = max(left, lo), min(right, hi)
            if a >= b:
                continue
            total += _antiderivative_at(piece, b - left) - _antiderivative_at(piece, a - left)
        return total

    def pullback(self, scale: Fraction, offset: Fraction) -> "PiecewisePolynomial":
        """x -> p(scale * x + offset) on the preimage of the domain"""
        scale, offset = Fraction(scale), Fraction(offset)
        if scale == 0:
            raise ValidationError("pullback needs a non-zero scale")
        breakpoints: List[Fraction] = []
        pieces: List[Coefficients] = []
        for i, piece in enumerate(self.pieces):
            left, right = self.breakpoints[i], self.breakpoints[i + 1]
            if scale > 0:
                pieces.append(_reflect(piece, scale))
                breakpoints.append((left - offset) / scale)
            else:
                pieces.append(_reflect(_taylor_shift(piece, right - left), scale))
                breakpoints.append((right - offset) / scale)
        if scale > 0:
            breakpoints.append((self.breakpoints[-1] - offset) / scale)
        else:
            breakpoints.reverse()
            pieces.reverse()
            breakpoints.append((self.breakpoints[0] - offset) / scale)
        return PiecewisePolynomial(tuple(breakpoints), tuple(_trim(p) for p in pieces))

    def restrict(self, lo: Fraction, hi: Fraction) -> "PiecewisePolynomial":
        d_lo, d_hi = self.domain
        if lo < d_lo or hi > d_hi or lo >= hi:
            raise ValidationError("restriction interval must lie inside the domain")
        inner = [b for b in self.breakpoints if lo < b < hi]
        merged = [Fraction(lo)] + inner + [Fraction(hi)]
        return PiecewisePolynomial(tuple(merged), tuple(_trim(p) for p in self._refined(merged)))

    def extend_by_zero(self, lo: Fraction, hi: Fraction, cls=None):
        """Extend to [lo, hi] by zero outside the current domain"""
        cls = cls or PiecewisePolynomial
        d_lo, d_hi = self.domain
        if lo > d_lo or hi < d_hi:
            raise ValidationError("extension interval must contain the domain")
        breakpoints = list(self.breakpoints)
        pieces = list(self.pieces)
        if lo < d_lo:
            breakpoints.insert(0, Fraction(lo))
            pieces.insert(0, ())
        if hi > d_hi:
            breakpoints.append(Fraction(hi))
            pieces.append(())
        return cls(tuple(breakpoints), tuple(pieces))

    # ------------------------------------------------------------------
    # extrema and shape
    # ------------------------------------------------------------------

    def _candidates(self) -> List[Coefficient]:
        points: List[Coefficient] = list(self.breakpoints)
        for i, piece in enumerate(self.pieces):
            if len(piece) < 3:
                continue
            width = float(self.breakpoints[i + 1] - self.breakpoints[i])
            slope = [float(j * c) for j, c in enumerate(piece)][1:]
            for root in np.roots(slope[::-1]):
                if abs(root.imag) < 1e-12 and 0 < root.real < width:
                    points.append(float(self.breakpoints[i]) + float(root.real))
        return points

    def argmax(self) -> Tuple[Coefficient, Coefficient]:
        """(x, h(x)) at a global maximum; breakpoints win ties"""
        best = None
        for x in self._candidates():
            value = self(x)
            if best is None or float(value) > float(best[1]) + 1e-15:
                best = (x, value)
        return best

    def max_abs(self) -> float:
        """Sup norm via piece endpoints and critical points"""
        return max(abs(float(self(x))) for x in self._candidates())

    def is_zero(self) -> bool:
        return all(not p for p in self.pieces)

    def support(self) -> Optional[Tuple[Fraction, Fraction]]:
        """Closed hull of the pieces that are not identically zero"""
        nonzero = [i for i, p in enumerate(self.pieces) if p]
        if not nonzero:
            return None
        return self.breakpoints[nonzero[0]], self.breakpoints[nonzero[-1] + 1]

    def is_even(self, tolerance: float = CONTINUITY_TOLERANCE) -> bool:
        lo, hi = self.domain
        if lo != -hi:
            return False
        mirrored = self.pullback(Fraction(-1), Fraction(0))
        return PiecewisePolynomial(self.breakpoints, self.pieces)._combine(
            mirrored, lambda p, q: _trim(_poly_add(p, tuple(-c for c in q)))
        ).max_abs() <= tolerance

    def jumps(self) -> List[float]:
        """Absolute jump at each interior breakpoint"""
        return [
            abs(float(_horner(self.pieces[i - 1], self.breakpoints[i] - self.breakpoints[i - 1])
                      - _horner(self.pieces[i], 0)))
            for i in range(1, len(self.pieces))
        ]

    def describe(self) -> List[dict]:
        return [
            {
                "interval": [format_rational(self.breakpoints[i]), format_rational(self.breakpoints[i + 1])],
                "coefficients": [format_rational(c) if isinstance(c, Fraction) else float(c) for c in piece],
            }
            for i, piece in enumerate(self.pieces)
        ]


class RadialProfile(PiecewisePolynomial):
    """Continuous profile h on [-1/2, 1/2]; the Hamiltonian is h o z"""

    def __post_init__(self):
        super().__post_init__()
        if self.domain != (Z_MIN, Z_MAX):
            raise ValidationError("radial profiles live on [-1/2, 1/2]")
        jumps = self.jumps()
        if jumps and max(jumps) > CONTINUITY_TOLERANCE:
            i = int(np.argmax(jumps)) + 1
            raise ValidationError(
                "profile is discontinuous",
                {"at": format_rational(self.breakpoints[i]), "jump": max(jumps)},
            )

    def calabi(self) -> Coefficient:
        """Integral of h dz over [-1/2, 1/2]"""
        return self.integral()


class TimeFactor(PiecewisePolynomial):
    """Piecewise-polynomial function of t on [0, 1]"""

    def __post_init__(self):
        super().__post_init__()
        if self.domain != (Fraction(0), Fraction(1)):
            raise ValidationError("time factors live on [0, 1]")


@dataclass(frozen=True)
class TimeDepRadial:
    """H(t, z) = sum f_i(t) h_i(z)"""
    terms: Tuple[Tuple[TimeFactor, RadialProfile], ...]

    def __call__(self, t: Coefficient, z: Coefficient) -> Coefficient:
        return sum((f(t) * h(z) for f, h in self.terms), Fraction(0))

    @classmethod
    def autonomous(cls, h: RadialProfile) -> "TimeDepRadial":
        return cls(((time_constant(1), h),))


def as_radial(p: PiecewisePolynomial) -> RadialProfile:
    """Restrict or extend by zero to [-1/2, 1/2]"""
    lo, hi = p.domain
    if lo < Z_MIN or hi > Z_MAX:
        p = p.restrict(max(lo, Z_MIN), min(hi, Z_MAX))
        lo, hi = p.domain
    return p.extend_by_zero(Z_MIN, Z_MAX, cls=RadialProfile) if (lo, hi) != (Z_MIN, Z_MAX) \
        else RadialProfile(p.breakpoints, p.pieces)


# ============================================================================
# BUILDERS
# ============================================================================

def const(value: Coefficient) -> RadialProfile:
    return RadialProfile.constant_on(Z_MIN, Z_MAX, as_number(value))


def time_constant(value: Coefficient) -> TimeFactor:
    return TimeFactor.constant_on(Fraction(0), Fraction(1), as_number(value))


def time_poly(coefficients: Sequence[Coefficient]) -> TimeFactor:
    """Single polynomial in t on [0, 1]"""
    return TimeFactor((Fraction(0), Fraction(1)), (_trim([as_number(c) for c in coefficients]),))


def poly(coefficients: Sequence[Coefficient], lo: Fraction = Z_MIN, hi: Fraction = Z_MAX) -> RadialProfile:
    """Polynomial in z on [lo, hi], zero elsewhere; must stay continuous"""
    lo, hi = Fraction(lo), Fraction(hi)
    if not Z_MIN <= lo < hi <= Z_MAX:
        raise ValidationError("polynomial interval must lie in [-1/2, 1/2]",
                              {"interval": [format_rational(lo), format_rational(hi)]})
    piece = PiecewisePolynomial.from_absolute((lo, hi), ([as_number(c) for c in coefficients],))
    return as_radial(piece)


_SMOOTHSTEP_UP = (Fraction(0), Fraction(0), Fraction(3), Fraction(-2))


def _ramp(height: Coefficient, width: Fraction, rising: bool) -> Coefficients:
    """C^1 cubic from 0 to height (or height to 0) over a piece of the given width"""
    coefficients = _reflect(_SMOOTHSTEP_UP, 1 / width)
    if not rising:
        coefficients = _poly_add((1,), tuple(-c for c in coefficients))
    return tuple(height * c for c in coefficients)


def bump(center: Fraction, width: Fraction, height: Coefficient) -> RadialProfile:
    """
    C^1 bump: smoothstep up on [center-width, center], down on [center, center+width]

    The maximum `height` sits exactly at the rational point `center`.
    """
    center, width, height = Fraction(center), Fraction(width), as_number(height)
    if width <= 0:
        raise ValidationError("bump width must be positive")
    lo, hi = center - width, center + width
    if lo < Z_MIN or hi > Z_MAX:
        raise ValidationError(
            "bump support leaves [-1/2, 1/2]",
            {"support": [format_rational(lo), format_rational(hi)]},
        )
    piece = PiecewisePolynomial((lo, center, hi), (_ramp(height, width, True), _ramp(height, width, False)))
    return as_radial(piece)


def plateau(lo: Fraction, hi: Fraction, ramp: Fraction, height: Coefficient) -> PiecewisePolynomial:
    """C^1 smoothed indicator: ramps of the given width inside [lo, hi], flat top between"""
    lo, hi, ramp = Fraction(lo), Fraction(hi), Fraction(ramp)
    if ramp <= 0 or 2 * ramp > hi - lo:
        raise ValidationError("ramps do not fit inside the plateau interval")
    breakpoints = [lo, lo + ramp]
    pieces: List[Coefficients] = [_ramp(height, ramp, True)]
    if hi - ramp > lo + ramp:
        breakpoints.append(hi - ramp)
        pieces.append((height,))
    breakpoints.append(hi)
    pieces.append(_ramp(height, ramp, False))
    return PiecewisePolynomial(tuple(breakpoints), tuple(_trim(p) for p in pieces))


def odd_extension(h_left: PiecewisePolynomial, center: Fraction) -> RadialProfile:
    """
    Extend a profile living left of `center` by h(center + s) = -h(center - s)

    Args:
        h_left: Piecewise polynomial whose domain ends at or before `center`
        center: Point of odd symmetry

    Returns:
        RadialProfile with zero mean, zero outside the mirrored support
    """
    center = Fraction(center)
    lo, hi = h_left.domain
    if hi > center:
        raise ValidationError("odd extension needs a profile left of the center")
    if hi < center:
        h_left = h_left.extend_by_zero(lo, center)
    mirror = h_left.pullback(Fraction(-1), 2 * center).scale(-1)
    if mirror.domain[1] > Z_MAX or lo < Z_MIN:
        raise ValidationError("odd extension leaves [-1/2, 1/2]",
                              {"center": format_rational(center)})
    joined = PiecewisePolynomial(
        h_left.breakpoints + mirror.breakpoints[1:], h_left.pieces + mirror.pieces
    )
    return as_radial(joined)


def smoothed_indicator(r: Fraction, delta: Fraction) -> RadialProfile:
    """
    Bump equal to 1 around z = -1/2 + r, odd about -1/2 + r + 2 delta

    The positive part rises over [x0-delta, x0-delta/2], stays 1 up to
    x0+delta and falls back to 0 at x0+3delta/2; support is
    [x0-delta, x0+5delta] with x0 = -1/2 + r.
    """
    r, delta = Fraction(r), Fraction(delta)
    if delta <= 0:
        raise ValidationError("delta must be positive")
    x0 = Z_MIN + r
    if x0 - delta < Z_MIN or x0 + 5 * delta > Z_MAX:
        raise ValidationError(
            "support [-1/2+r-delta, -1/2+r+5delta] leaves (-1/2, 1/2)",
            {"r": format_rational(r), "delta": format_rational(delta)},
        )
    positive = plateau(x0 - delta, x0 + 3 * delta / 2, delta / 2, Fraction(1))
    return odd_extension(positive, x0 + 2 * delta)


def random_piecewise_cubic(rng: random.Random, pieces: int = 6, amplitude: float = 1.0) -> RadialProfile:
    """
    C^1 Hermite cubic through random values and slopes on a uniform rational grid

    Args:
        rng: Seeded random source
        pieces: Number of cubic pieces
        amplitude: Values are drawn from [-amplitude, amplitude]

    Returns:
        RadialProfile with float coefficients
    """
    if pieces < 1:
        raise ValidationError("need at least one piece")
    breakpoints = tuple(Z_MIN + Fraction(j, pieces) for j in range(pieces + 1))
    values = [rng.uniform(-amplitude, amplitude) for _ in breakpoints]
    slopes = [rng.uniform(-4 * amplitude, 4 * amplitude) for _ in breakpoints]
    width = 1.0 / pieces
    cubic = []
    for i in range(pieces):
        y0, y1, m0, m1 = values[i], values[i + 1], slopes[i], slopes[i + 1]
        secant = (y1 - y0) / width
        c2 = (3 * secant - 2 * m0 - m1) / width
        c3 = (m0 + m1 - 2 * secant) / width ** 2
        cubic.append((y0, m0, c2, c3))
    return RadialProfile(breakpoints, tuple(_trim(p) for p in cubic))


# ============================================================================
# PROFILE GRAMMAR
# ============================================================================

def _split_terms(text: str) -> List[str]:
    terms, depth, current = [], 0, []
    for i, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "+" and depth == 0 and current and text[i - 1] not in "eE:,[":
            terms.append("".join(current))
            current = []
            continue
        current.append(ch)
    terms.append("".join(current))
    return [t.strip() for t in terms if t.strip()]


def _bracketed(text: str) -> List[str]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValidationError("expected a bracketed list", {"text": text})
    return [item.strip() for item in text[1:-1].split(",") if item.strip()]


def _parse_term(term: str) -> RadialProfile:
    kind, _, body = term.partition(":")
    kind = kind.strip().lower()
    if kind == "const":
        return const(as_number(body))
    if kind == "poly":
        coefficients, _, interval = body.partition("@")
        values = [as_number(c) for c in _bracketed(coefficients)]
        if interval:
            lo, hi = (as_number(v) for v in _bracketed(interval))
            return poly(values, lo, hi)
        return poly(values)
    args = [as_number(v) for v in body.split(",") if v.strip()]
    if kind == "bump":
        if len(args) != 3:
            raise ValidationError("bump takes center,width,height", {"term": term})
        return bump(*args)
    if kind == "indicator-smooth":
        if len(args) != 2:
            raise ValidationError("indicator-smooth takes r,delta", {"term": term})
        return smoothed_indicator(*args)
    raise ValidationError("unknown profile kind", {"kind": kind})


def parse_profile(text: str) -> RadialProfile:
    """
    Parse `const:c`, `poly:[c0,c1,...]@[a,b]`, `bump:center,width,height`,
    `indicator-smooth:r,delta`, joined by `+`

    Example:
        >>> parse_profile("poly:[0,1]@[0,1/2]")(Fraction(1, 10))
        Fraction(1, 10)
    """
    terms = _split_terms(text or "")
    if not terms:
        raise ValidationError("empty profile")
    profile = _parse_term(terms[0])
    for term in terms[1:]:
        profile = profile + _parse_term(term)
    logger.debug(f"Parsed profile {text!r} into {len(profile.pieces)} pieces")
    return profile
