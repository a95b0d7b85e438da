"""Fixed-precision arithmetic on the circle R/Z.

A point is an integer number of ticks on a 2**bits grid over one full turn.
Group operations (rotation, difference, distance) are exact modular integer
arithmetic; quantization happens exactly once, when an external real value is
converted to ticks. Two points closer than EPSILON_CMP_TICKS are treated as
coincident by order predicates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DegenerateTriple

DEFAULT_BITS = 256

# Order predicates refuse to separate points closer than this: 2**16 ticks,
# i.e. an angle of 2**(16 - bits) turns.
EPSILON_CMP_TICKS = 1 << 16

AngleLike = Union[Fraction, float, int, str]


def round_ratio(num: int, den: int) -> int:
    """Nearest integer to num/den, ties to even. den > 0."""
    q, r = divmod(num, den)
    twice = 2 * r
    if twice > den or (twice == den and q % 2):
        q += 1
    return q


def as_fraction(value: AngleLike) -> Fraction:
    """Exact rational for a float, int, Fraction, or numeric string.

    Strings may be decimal ("0.618...") or a ratio ("1/2"). Floats convert
    exactly (they are binary rationals); no decimal re-reading happens here.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(value)


def as_tick_count(value: AngleLike, bits: int) -> int:
    """Round value (in turns) to a signed whole number of ticks."""
    f = as_fraction(value)
    return round_ratio(f.numerator << bits, f.denominator)


def eps_ticks(eps: float, bits: int) -> int:
    """Smallest tick count covering an absolute angle tolerance eps."""
    f = as_fraction(eps)
    if f <= 0:
        raise ValueError("eps must be positive")
    num = f.numerator << bits
    return max(1, -((-num) // f.denominator))


def golden_ticks(bits: int) -> int:
    """(sqrt(5) - 1) / 2 rounded to ticks, via exact integer square root."""
    guard = bits + 16
    s = math.isqrt(5 << (2 * guard))
    return round_ratio(s - (1 << guard), 1 << (guard - bits + 1))


def sqrt2m1_ticks(bits: int) -> int:
    """sqrt(2) - 1 rounded to ticks."""
    guard = bits + 16
    s = math.isqrt(2 << (2 * guard))
    return round_ratio(s - (1 << guard), 1 << (guard - bits))


def exact_decimal(ticks: int, bits: int) -> str:
    """Exact decimal expansion of ticks / 2**bits in [0, 1).

    2**-bits has a terminating decimal of `bits` digits, so the result is
    exact. Trailing zeros are stripped for a canonical form.
    """
    if not 0 <= ticks < (1 << bits):
        raise ValueError("ticks out of range")
    if ticks == 0:
        return "0"
    digits = str(ticks * 5**bits).rjust(bits, "0").rstrip("0")
    return "0." + digits


def fixed_decimal(value: Fraction, places: int = 40) -> str:
    """value rendered with exactly `places` fractional digits, round half even."""
    sign = "-" if value < 0 else ""
    scaled = round_ratio(abs(value).numerator * 10**places, abs(value).denominator)
    whole, frac = divmod(scaled, 10**places)
    return f"{sign}{whole}.{str(frac).rjust(places, '0')}"


@dataclass(frozen=True)
class CirclePoint:
    """An angle in [0, 1) turns stored as ticks on a 2**bits grid."""

    ticks: int
    bits: int = DEFAULT_BITS

    def __post_init__(self):
        if not 0 <= self.ticks < (1 << self.bits):
            raise ValueError("ticks out of [0, 2**bits)")

    @classmethod
    def from_ticks(cls, ticks: int, bits: int = DEFAULT_BITS) -> "CirclePoint":
        return cls(ticks % (1 << bits), bits)

    @classmethod
    def from_value(cls, value: AngleLike, bits: int = DEFAULT_BITS) -> "CirclePoint":
        return cls(as_tick_count(value, bits) % (1 << bits), bits)

    @property
    def modulus(self) -> int:
        return 1 << self.bits

    @property
    def angle(self) -> float:
        return math.ldexp(float(self.ticks), -self.bits)

    def as_fraction(self) -> Fraction:
        return Fraction(self.ticks, 1 << self.bits)

    def decimal(self) -> str:
        return exact_decimal(self.ticks, self.bits)

    def __repr__(self) -> str:
        return f"CirclePoint({self.angle:.12g}, bits={self.bits})"


def _check_same_grid(*points: CirclePoint) -> int:
    bits = points[0].bits
    for p in points[1:]:
        if p.bits != bits:
            raise ValueError("points live on different precision grids")
    return bits


def dist_ticks(p: CirclePoint, q: CirclePoint) -> int:
    """Shortest arc between p and q, in ticks. Exact."""
    _check_same_grid(p, q)
    d = (p.ticks - q.ticks) % p.modulus
    return min(d, p.modulus - d)


def dist_T(p: CirclePoint, q: CirclePoint) -> float:
    """Circle metric: shortest-arc distance in turns, in [0, 1/2]."""
    return math.ldexp(float(dist_ticks(p, q)), -p.bits)


def rotate(p: CirclePoint, eta: Union[AngleLike, CirclePoint]) -> CirclePoint:
    """Rigid rotation p + eta. Exact once eta is on the grid."""
    if isinstance(eta, CirclePoint):
        _check_same_grid(p, eta)
        t = eta.ticks
    else:
        t = as_tick_count(eta, p.bits)
    return CirclePoint((p.ticks + t) % p.modulus, p.bits)


def rotate_ticks(p: CirclePoint, t: int) -> CirclePoint:
    return CirclePoint((p.ticks + t) % p.modulus, p.bits)


def cyclic_order(p0: CirclePoint, p1: CirclePoint, p2: CirclePoint) -> bool:
    """True iff p1 lies on the closed counterclockwise arc from p0 to p2.

    Raises DegenerateTriple when any two inputs coincide at working precision,
    since the predicate is then meaningless.
    """
    _check_same_grid(p0, p1, p2)
    if (
        dist_ticks(p0, p1) < EPSILON_CMP_TICKS
        or dist_ticks(p1, p2) < EPSILON_CMP_TICKS
        or dist_ticks(p0, p2) < EPSILON_CMP_TICKS
    ):
        raise DegenerateTriple("points coincide at working precision")
    m = p0.modulus
    return (p1.ticks - p0.ticks) % m <= (p2.ticks - p0.ticks) % m


@dataclass(frozen=True)
class Arc:
    """Closed counterclockwise arc from `start` to `end`.

    `full=True` marks the whole circle (start == end then); otherwise the
    endpoints must differ and the arc is the proper closed segment between
    them, possibly wrapping through angle zero.
    """

    start: CirclePoint
    end: CirclePoint
    full: bool = False

    def __post_init__(self):
        _check_same_grid(self.start, self.end)
        if self.full:
            if self.start.ticks != self.end.ticks:
                raise ValueError("full arc must have coinciding endpoints")
        elif self.start.ticks == self.end.ticks:
            raise ValueError("degenerate arc; use full=True for the whole circle")

    @classmethod
    def full_circle(cls, bits: int = DEFAULT_BITS) -> "Arc":
        origin = CirclePoint(0, bits)
        return cls(origin, origin, full=True)

    @property
    def length_ticks(self) -> int:
        if self.full:
            return self.start.modulus
        return (self.end.ticks - self.start.ticks) % self.start.modulus

    @property
    def length(self) -> float:
        return math.ldexp(float(self.length_ticks), -self.start.bits)

    def length_fraction(self) -> Fraction:
        return Fraction(self.length_ticks, self.start.modulus)

    def contains(self, p: CirclePoint) -> bool:
        if self.full:
            return True
        _check_same_grid(self.start, p)
        m = self.start.modulus
        return (p.ticks - self.start.ticks) % m <= (self.end.ticks - self.start.ticks) % m

    def midpoint(self) -> CirclePoint:
        return rotate_ticks(self.start, self.length_ticks // 2)

    def rotated(self, eta: Union[AngleLike, CirclePoint]) -> "Arc":
        return Arc(rotate(self.start, eta), rotate(self.end, eta), self.full)


def arc_contains(a: Arc, p: CirclePoint) -> bool:
    """Membership in the closed arc, wraparound included."""
    return a.contains(p)


@dataclass(frozen=True)
class LiftValue:
    """A point on the real line covering the circle: value = ticks / 2**bits.

    `ticks` is unbounded; the fractional part is the covered circle point,
    exactly. Degree-one behavior (adding a full turn adds 2**bits ticks) is
    integer arithmetic, so identities like F(x + 1) = F(x) + 1 hold exactly.
    """

    ticks: int
    bits: int = DEFAULT_BITS

    @classmethod
    def from_value(cls, value: AngleLike, bits: int = DEFAULT_BITS) -> "LiftValue":
        return cls(as_tick_count(value, bits), bits)

    @property
    def value(self) -> float:
        return float(self.as_fraction())

    def as_fraction(self) -> Fraction:
        return Fraction(self.ticks, 1 << self.bits)

    @property
    def base(self) -> CirclePoint:
        return CirclePoint(self.ticks % (1 << self.bits), self.bits)

    def add_turns(self, k: int) -> "LiftValue":
        return LiftValue(self.ticks + (k << self.bits), self.bits)

    def decimal(self, places: int = 40) -> str:
        return fixed_decimal(self.as_fraction(), places)

    def __repr__(self) -> str:
        return f"LiftValue({self.value:.12g}, bits={self.bits})"
