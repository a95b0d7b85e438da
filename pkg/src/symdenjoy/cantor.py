"""Symmetric Cantor system on the circle: dense base set, gap table, collapse map.

The object built here is the minimal set of a Denjoy-type circle map with an
order-m rotational symmetry. Start from the countable dense set

    D = { phi + k/m + n*tau  (mod 1) : 0 <= k < m, n in Z },

tau irrational at working precision, and assign each base point d = d(k, n) an
open "gap" of length ell(k, n) = w(n) / m, where the level weights w(n) follow
a summable schedule of total mass one. Gaps are placed by the jump function

    a(x) = sum of ell over base points strictly below x   (circle cut at 0),

i.e. the gap of d occupies (a(d), a(d) + ell(d)) plus the accumulated offset;
because placement is by cumulative sums in circle order, the gaps are pairwise
disjoint, their cyclic order matches the cyclic order of their base points,
and the complement C (the gaps removed from the circle) is a closed set of
Lebesgue measure zero carrying the symmetry.

Finite realization: only levels |n| <= depth are tabulated. Integer tick
lengths per level are apportioned (largest remainder, deterministic ties) so
each of the m symmetry sectors carries exactly 2**bits // m ticks; the closed
gaps then tile the circle exactly, and the k -> k+1 sector shift is an exact
translation. The untabulated remainder of the construction is below the
table's resolution: queries take an `eps` and answer with absolute error at
most eps whenever the schedule tail at `depth` is <= eps/2.
"""

from __future__ import annotations

import hashlib
import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Union

from .circle import (
    DEFAULT_BITS,
    EPSILON_CMP_TICKS,
    AngleLike,
    Arc,
    CirclePoint,
    as_fraction,
    as_tick_count,
    eps_ticks,
    exact_decimal,
    golden_ticks,
    round_ratio,
    sqrt2m1_ticks,
)
from .errors import ConfigInvalid, DepthExceeded, PrecisionCollision

DEFAULT_EPS = 1e-30

# Extra table levels past the eps-driven truncation depth, so that gaps just
# below the resolution threshold still have tabulated images.
DEPTH_MARGIN = 2

SYMBOLIC_ANGLES = {
    "golden": golden_ticks,
    "sqrt2m1": sqrt2m1_ticks,
}


def resolve_angle(value: AngleLike, bits: int) -> int:
    """Ticks for a symbolic name ("golden", "sqrt2m1") or any numeric angle."""
    if isinstance(value, str) and value in SYMBOLIC_ANGLES:
        return SYMBOLIC_ANGLES[value](bits)
    return as_tick_count(value, bits) % (1 << bits)


@dataclass(frozen=True)
class GapSchedule:
    """Two-sided geometric level weights w(n) = w0 * ratio**|n|, n in Z.

    w0 is chosen so the total over all n equals `mass` (mass = 1 makes the
    leftover Cantor set null). All schedule arithmetic is exact rational.
    """

    ratio: Fraction = Fraction(1, 2)
    mass: Fraction = Fraction(1)

    kind = "geometric"

    def __post_init__(self):
        if not 0 < self.ratio < 1:
            raise ConfigInvalid("schedule.ratio", "must lie strictly between 0 and 1")
        if self.mass <= 0:
            raise ConfigInvalid("schedule.mass", "must be positive")

    @property
    def w0(self) -> Fraction:
        return self.mass * (1 - self.ratio) / (1 + self.ratio)

    def weight(self, n: int) -> Fraction:
        return self.w0 * self.ratio ** abs(n)

    def partial_mass(self, depth: int) -> Fraction:
        """Exact sum of w(n) over |n| <= depth."""
        if depth < 0:
            raise ValueError("depth must be >= 0")
        return self.mass - self.tail_bound(depth)

    def tail_bound(self, depth: int) -> Fraction:
        """Exact sum of w(n) over |n| > depth (closed form)."""
        if depth < 0:
            raise ValueError("depth must be >= 0")
        return 2 * self.w0 * self.ratio ** (depth + 1) / (1 - self.ratio)

    def truncation_depth(self, eps: float) -> int:
        """Smallest N whose tail is at most eps/2."""
        target = as_fraction(eps) / 2
        if target <= 0:
            raise ValueError("eps must be positive")
        n = 0
        tail = self.tail_bound(0)
        while tail > target:
            n += 1
            tail *= self.ratio
        return n

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": {"ratio": str(self.ratio), "mass": str(self.mass)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GapSchedule":
        if data.get("kind") != cls.kind:
            raise ConfigInvalid("schedule.kind", f"unsupported kind {data.get('kind')!r}")
        params = data.get("params", {})
        try:
            return cls(Fraction(params["ratio"]), Fraction(params["mass"]))
        except (KeyError, ValueError, ZeroDivisionError) as exc:
            raise ConfigInvalid("schedule.params", str(exc)) from exc


class OrbitIndex(NamedTuple):
    """Label of a base point / gap: sector k in [0, m), level n in Z."""

    k: int
    n: int


@dataclass(frozen=True)
class InGap:
    """Classification: the query point lies in the closed gap `index`."""

    index: OrbitIndex


class _NearCantor:
    def __repr__(self) -> str:
        return "NearCantor"


# Classification for points not resolvable into any gap of length >= eps.
NEAR_CANTOR = _NearCantor()

Classification = Union[InGap, _NearCantor]


class CantorApprox:
    """Finite-depth realization of the symmetric Cantor system.

    Mutation-free after construction; all arrays are tuples and every query
    is pure, so instances are safe to share across threads.
    """

    def __init__(
        self,
        m: int = 2,
        tau: AngleLike = "golden",
        phi: AngleLike = 0,
        schedule: Optional[GapSchedule] = None,
        depth: int = 8,
        bits: int = DEFAULT_BITS,
        eps: float = DEFAULT_EPS,
    ):
        if not isinstance(m, int) or m < 1:
            raise ConfigInvalid("m", "symmetry order must be a positive integer")
        if bits < 64:
            raise ConfigInvalid("precision_bits", "need at least 64 bits")
        if depth < 1:
            raise ConfigInvalid("depth", "depth must be >= 1")
        self.m = m
        self.bits = bits
        self.schedule = schedule if schedule is not None else GapSchedule()
        self.build_eps = eps
        self.depth = max(depth, self.schedule.truncation_depth(eps) + DEPTH_MARGIN)

        R = 1 << bits
        self.tau_ticks = resolve_angle(tau, bits)
        self.phi_ticks = resolve_angle(phi, bits)
        # Exact rotation by 1/m on the grid, and the sector width the table
        # tiles with. They differ by at most one tick (rounding vs floor).
        self.sector_ticks = round_ratio(R, m)
        self._sector_target = R // m

        self._build_table()

    # -- construction ---------------------------------------------------

    def _build_table(self) -> None:
        R = 1 << self.bits
        N = self.depth
        m = self.m

        entries = []
        for n in range(-N, N + 1):
            base = (self.phi_ticks + n * self.tau_ticks) % R
            for k in range(m):
                entries.append(((base + k * self.sector_ticks) % R, k, n))
        entries.sort()

        for (p0, k0, n0), (p1, k1, n1) in zip(entries, entries[1:]):
            if p1 - p0 < EPSILON_CMP_TICKS:
                raise PrecisionCollision(
                    f"base points {(k0, n0)} and {(k1, n1)} are "
                    f"{p1 - p0} ticks apart at depth {N}"
                )
        wrap = (entries[0][0] - entries[-1][0]) % R
        if len(entries) > 1 and wrap < EPSILON_CMP_TICKS:
            raise PrecisionCollision(
                f"base points {entries[-1][1:]} and {entries[0][1:]} wrap within "
                f"{wrap} ticks at depth {N}"
            )

        lengths = self._apportion_lengths(N)

        pos, ks, ns, lens = [], [], [], []
        for p, k, n in entries:
            pos.append(p)
            ks.append(k)
            ns.append(n)
            lens.append(lengths[n])
        cum = [0]
        for length in lens:
            cum.append(cum[-1] + length)

        self._pos = tuple(pos)
        self._k = tuple(ks)
        self._n = tuple(ns)
        self._len = tuple(lens)
        self._cum = tuple(cum)
        self._level_len = dict(lengths)
        self._slot_of_index = {
            (ks[i], ns[i]): i for i in range(len(entries))
        }

    def _apportion_lengths(self, N: int) -> dict:
        """Integer ticks per level, summing exactly to 2**bits // m.

        Largest-remainder apportionment of the renormalized level weights,
        ties broken toward shallow levels (then nonnegative n) so the result
        is deterministic.
        """
        total = self.schedule.partial_mass(N)
        target = self._sector_target
        base, remainders = {}, []
        for n in range(-N, N + 1):
            ideal = target * self.schedule.weight(n) / total
            whole = ideal.numerator // ideal.denominator
            base[n] = whole
            remainders.append((ideal - whole, n))
        leftover = target - sum(base.values())
        remainders.sort(key=lambda item: (-item[0], abs(item[1]), -item[1]))
        for _, n in remainders[:leftover]:
            base[n] += 1
        for n, length in base.items():
            if length < 1:
                raise PrecisionCollision(
                    f"gap length at level {n} underflows one tick; "
                    "reduce depth or increase precision"
                )
        return base

    # -- low-level queries (ticks in, ticks out) ------------------------

    @property
    def table_size(self) -> int:
        return len(self._pos)

    def _slot(self, y: int) -> int:
        """Index of the closed gap [cum[i], cum[i+1]) containing tick y.

        Returns table_size when y falls in the wrap slack (the < m ticks
        between the last gap's end and the full circle, when m does not
        divide 2**bits).
        """
        return bisect_right(self._cum, y) - 1

    def _jump(self, x: int) -> int:
        """Cumulative length over base points strictly below x."""
        return self._cum[bisect_left(self._pos, x)]

    def _slack_pullback(self, y: int) -> int:
        # Monotone filler for the wrap slack: interpolate into the open
        # interval just past the last base point, so the slack continues the
        # last gap's right endpoint instead of re-entering its base point.
        R = 1 << self.bits
        s_total = self._cum[-1]
        width = R - s_total
        last = self._pos[-1] + 1
        return (last + (y - s_total) * (R - last) // width) % R

    def _eps_slot_ticks(self, eps: float) -> int:
        return eps_ticks(eps, self.bits)

    def _require_resolution(self, eps: float) -> None:
        if self.schedule.truncation_depth(eps) > self.depth:
            raise DepthExceeded(
                f"eps={eps!r} needs depth {self.schedule.truncation_depth(eps)}, "
                f"table built to {self.depth}"
            )

    # -- public operations ----------------------------------------------

    def base_point(self, idx: OrbitIndex) -> CirclePoint:
        """d(k, n) = phi + k/m + n*tau on the grid. Exact."""
        k, n = idx
        if not 0 <= k < self.m:
            raise ValueError(f"sector index k={k} outside [0, {self.m})")
        R = 1 << self.bits
        t = (self.phi_ticks + k * self.sector_ticks + n * self.tau_ticks) % R
        return CirclePoint(t, self.bits)

    def _slot_index_for(self, idx: OrbitIndex) -> int:
        k, n = idx
        if not 0 <= k < self.m:
            raise ValueError(f"sector index k={k} outside [0, {self.m})")
        slot = self._slot_of_index.get((k, n))
        if slot is None:
            raise DepthExceeded(f"level n={n} beyond table depth {self.depth}")
        return slot

    def gap_left_endpoint(self, idx: OrbitIndex, eps: float = DEFAULT_EPS) -> CirclePoint:
        """Left endpoint of gap(idx): the jump function evaluated at d(idx)."""
        self._require_resolution(eps)
        slot = self._slot_index_for(idx)
        return CirclePoint(self._cum[slot], self.bits)

    def gap(self, idx: OrbitIndex, eps: float = DEFAULT_EPS) -> Arc:
        """The closed gap assigned to base point idx."""
        self._require_resolution(eps)
        slot = self._slot_index_for(idx)
        start = self._cum[slot]
        return Arc(
            CirclePoint(start, self.bits),
            CirclePoint((start + self._len[slot]) % (1 << self.bits), self.bits),
        )

    def gap_length_fraction(self, idx: OrbitIndex) -> Fraction:
        slot = self._slot_index_for(idx)
        return Fraction(self._len[slot], 1 << self.bits)

    def gaps(self, max_level: Optional[int] = None) -> Iterator[tuple[OrbitIndex, Arc]]:
        """All tabulated gaps with |n| <= max_level, in circle order."""
        limit = self.depth if max_level is None else min(max_level, self.depth)
        for i in range(self.table_size):
            if abs(self._n[i]) <= limit:
                start = self._cum[i]
                yield OrbitIndex(self._k[i], self._n[i]), Arc(
                    CirclePoint(start, self.bits),
                    CirclePoint((start + self._len[i]) % (1 << self.bits), self.bits),
                )

    def stage(self, j: int, eps: float = DEFAULT_EPS) -> list[Arc]:
        """Stage-j cover: the circle minus all gaps of level |n| < j.

        stage(0) is the full circle; stage(j) consists of m*(2j - 1) closed
        arcs, nested decreasingly in j, whose intersection over all j is the
        Cantor set (up to table resolution).
        """
        if j < 0:
            raise ValueError("stage index must be >= 0")
        if j > self.depth:
            raise DepthExceeded(f"stage {j} beyond table depth {self.depth}")
        if j == 0:
            return [Arc.full_circle(self.bits)]
        R = 1 << self.bits
        removed = [i for i in range(self.table_size) if abs(self._n[i]) < j]
        arcs = []
        for a, b in zip(removed, removed[1:] + removed[:1]):
            start = (self._cum[a] + self._len[a]) % R
            end = self._cum[b] % R
            arcs.append(Arc(CirclePoint(start, self.bits), CirclePoint(end, self.bits)))
        return arcs

    def cantor_function(self, y: CirclePoint, eps: float = DEFAULT_EPS) -> CirclePoint:
        """Monotone degree-one collapse: each gap maps to its base point.

        Exact on tabulated gaps; points below resolution land within eps of
        the true value (truncated levels move the answer by at most the
        schedule tail).
        """
        self._require_resolution(eps)
        self._check_grid(y)
        i = self._slot(y.ticks)
        if i == self.table_size:
            return CirclePoint(self._slack_pullback(y.ticks), self.bits)
        return CirclePoint(self._pos[i], self.bits)

    def classify(self, y: CirclePoint, eps: float = DEFAULT_EPS) -> Classification:
        """InGap(idx) when y lies in the closed gap(idx) and ell(idx) >= eps.

        Boundary ticks shared by two resolvable gaps resolve to the gap that
        owns the tick in the half-open tiling (the one starting at y).
        Everything else is NEAR_CANTOR: y is within eps of the Cantor set.
        """
        self._require_resolution(eps)
        self._check_grid(y)
        threshold = self._eps_slot_ticks(eps)
        i = self._slot(y.ticks)
        if i < self.table_size:
            if self._len[i] >= threshold:
                return InGap(OrbitIndex(self._k[i], self._n[i]))
            # y may still be the closed right endpoint of the previous gap.
            if y.ticks == self._cum[i]:
                prev = i - 1
                if prev >= 0 and self._len[prev] >= threshold:
                    return InGap(OrbitIndex(self._k[prev], self._n[prev]))
        elif y.ticks == self._cum[-1] and self._len[-1] >= threshold:
            return InGap(OrbitIndex(self._k[-1], self._n[-1]))
        return NEAR_CANTOR

    def measure_remaining(self, depth: int) -> float:
        """Lebesgue measure left after removing all gaps of level |n| <= depth."""
        return float(self.measure_remaining_exact(depth))

    def measure_remaining_exact(self, depth: int) -> Fraction:
        return 1 - self.schedule.partial_mass(depth)

    def resolution_level(self, eps: float) -> int:
        """Shallowest level whose gaps fall below eps (table lengths)."""
        threshold = self._eps_slot_ticks(eps)
        for n in range(self.depth + 1):
            if self._level_len[n] < threshold:
                return n
        return self.depth

    def near_cantor_slots(self, eps: float) -> list[int]:
        """Table slots below the eps resolution whose images stay tabulated."""
        threshold = self._eps_slot_ticks(eps)
        return [
            i
            for i in range(self.table_size)
            if self._len[i] < threshold and abs(self._n[i]) < self.depth
        ]

    def sample_near_cantor(self, rng, eps: float, count: int) -> list[CirclePoint]:
        """Deterministic sample of points classified NEAR_CANTOR at eps."""
        slots = self.near_cantor_slots(eps)
        if not slots:
            raise DepthExceeded(f"no sub-eps gaps tabulated at eps={eps!r}")
        out = []
        attempts = 0
        while len(out) < count:
            attempts += 1
            if attempts > 64 * count:
                raise PrecisionCollision("sub-eps gaps too narrow to sample")
            i = slots[rng.randrange(len(slots))]
            if self._len[i] < 2:
                continue
            y = CirclePoint(self._cum[i] + rng.randrange(1, self._len[i]), self.bits)
            if self.classify(y, eps) is NEAR_CANTOR:
                out.append(y)
        return out

    def _check_grid(self, p: CirclePoint) -> None:
        if p.bits != self.bits:
            raise ValueError("point is on a different precision grid")

    # -- serialization ----------------------------------------------------

    def to_config(self) -> dict:
        return {
            "m": self.m,
            "tau": exact_decimal(self.tau_ticks, self.bits),
            "phi": exact_decimal(self.phi_ticks, self.bits),
            "schedule": self.schedule.to_dict(),
            "depth": self.depth,
            "precision_bits": self.bits,
        }

    def config_json(self) -> bytes:
        return (
            json.dumps(self.to_config(), sort_keys=True, separators=(",", ":")) + "\n"
        ).encode("ascii")

    def config_hash(self) -> str:
        return hashlib.sha256(self.config_json()).hexdigest()

    @classmethod
    def from_config(cls, data: dict, eps: float = DEFAULT_EPS) -> "CantorApprox":
        try:
            return cls(
                m=int(data["m"]),
                tau=data["tau"],
                phi=data["phi"],
                schedule=GapSchedule.from_dict(data["schedule"]),
                depth=int(data["depth"]),
                bits=int(data["precision_bits"]),
                eps=eps,
            )
        except KeyError as exc:
            raise ConfigInvalid(str(exc), "missing field") from exc
