"""Planar admissible map with an attracting fixed point at the origin.

In polar coordinates h(theta, rho) = (f(theta), R(theta, rho)) where f is the
Denjoy circle map and the radial map contracts toward the origin:

    R(theta, rho) = rho / 2                                   rho <= 1/2
                  = (3/4 - Pi(theta)) * (2 rho - 1) + 1/4     1/2 < rho <= 1
                  = rho / 2 + 1/2 - Pi(theta)                 rho > 1

Pi is a bump supported off the Cantor set C: zero on C, and on the gap of
base point (k, n) it rises linearly from both endpoints to a crest scaled by
a per-gap coefficient that vanishes as |n| grows. The seams agree exactly
(R -> 1/4 at rho = 1/2, R -> 1 - Pi at rho = 1 from both sides), R is
continuous and strictly increasing in rho, and since sup Pi <= pi_cap < 3/8
every orbit's radius decays geometrically: the origin attracts the plane.
The unit circle over C is where contraction degenerates (Pi = 0 there), which
is what makes the example delicate and worth verifying numerically.

The coefficient must not depend on k, or h would fail to commute with the
order-m rotation; the default is 1/(2|n| + 1), rescaled so sup Pi = pi_cap.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .cantor import DEFAULT_EPS
from .circle import CirclePoint, round_ratio
from .denjoy import DenjoyMap
from .errors import ConfigInvalid, ErrorBudgetExceeded, NegativeRadius


@dataclass(frozen=True)
class PlanarPoint:
    """Point in polar coordinates; radius stored in ticks like the angle."""

    theta: CirclePoint
    rho_ticks: int

    def __post_init__(self):
        if self.rho_ticks < 0:
            raise NegativeRadius(f"rho_ticks={self.rho_ticks}")

    @classmethod
    def from_values(cls, theta, rho, bits: int) -> "PlanarPoint":
        from .circle import as_tick_count

        rho_t = as_tick_count(rho, bits)
        if rho_t < 0:
            raise NegativeRadius(f"rho={rho!r}")
        return cls(CirclePoint.from_value(theta, bits), rho_t)

    @property
    def bits(self) -> int:
        return self.theta.bits

    @property
    def rho(self) -> float:
        return math.ldexp(float(self.rho_ticks), -self.bits)


@dataclass(frozen=True)
class BumpValue:
    value: float
    bound: float
    ticks: int


def default_coefficient(k: int, n: int) -> Fraction:
    """Per-gap crest scale 1/(2|n| + 1); independent of the sector k."""
    return Fraction(1, 2 * abs(n) + 1)


@dataclass(frozen=True)
class PlanarOrbit:
    points: tuple[PlanarPoint, ...]
    error_bound: float


class AdmissibleMap:
    """The planar extension of a DenjoyMap."""

    def __init__(
        self,
        denjoy: DenjoyMap,
        pi_cap: Fraction = Fraction(1, 4),
        coefficient: Optional[Callable[[int, int], Fraction]] = None,
    ):
        pi_cap = Fraction(pi_cap)
        if not 0 < pi_cap < Fraction(3, 8):
            raise ConfigInvalid("pi_cap", "must lie in (0, 3/8) to keep R monotone")
        self.denjoy = denjoy
        self.cantor = denjoy.cantor
        self.pi_cap = pi_cap
        self.coefficient = coefficient if coefficient is not None else default_coefficient

        sup = Fraction(0)
        for n in range(self.cantor.depth + 1):
            for k in range(self.cantor.m):
                c = Fraction(self.coefficient(k, n))
                if c <= 0:
                    raise ConfigInvalid("coefficient", f"must be positive, got {c} at {(k, n)}")
                sup = max(sup, c)
        # Global rescale so the crest of the widest-coefficient gap hits pi_cap.
        self._scale = 2 * pi_cap / sup
        self._coeff_sup = sup

    @property
    def bits(self) -> int:
        return self.cantor.bits

    @property
    def m(self) -> int:
        return self.cantor.m

    # -- bump --------------------------------------------------------------

    def _near_cantor_bound(self, eps: float) -> float:
        n_star = self.cantor.resolution_level(eps)
        worst = Fraction(0)
        for k in range(self.cantor.m):
            worst = max(worst, Fraction(self.coefficient(k, n_star)))
        return float(self._scale * worst / 2)

    def _bump_ticks(self, y: int, eps: float) -> tuple[int, float]:
        ca = self.cantor
        R = 1 << ca.bits
        i = ca._slot(y)
        if i == ca.table_size:
            return 0, self._near_cantor_bound(eps)
        off = y - ca._cum[i]
        length = ca._len[i]
        dist = min(off, length - off)
        if dist == 0:
            # On the Cantor set (gap endpoints belong to C).
            bound = 0.0 if length >= ca._eps_slot_ticks(eps) else self._near_cantor_bound(eps)
            return 0, bound
        c = self._scale * Fraction(self.coefficient(ca._k[i], ca._n[i]))
        ticks = round_ratio(c.numerator * dist * R, c.denominator * length)
        if length >= ca._eps_slot_ticks(eps):
            # Endpoint placement is exact in the table; the honest uncertainty
            # versus the untruncated construction is at most the schedule tail
            # on each endpoint, amplified by the crest slope 2c/length.
            tail = eps / 2
            bound = min(float(c) / 2, float(c) * tail / math.ldexp(float(length), -ca.bits))
            bound += math.ldexp(4.0, -ca.bits)
        else:
            bound = self._near_cantor_bound(eps)
        return ticks, bound

    def bump(self, theta: CirclePoint, eps: float = DEFAULT_EPS) -> BumpValue:
        """Pi(theta) with an error bound.

        Zero exactly on gap endpoints and (to within the reported bound) on
        the rest of the Cantor set; on a resolvable gap the value is the
        exact tent formula. Crests are coefficient-scaled, so a value at an
        unresolvable point never exceeds the rescaled coefficient at the
        finest resolved depth; that ceiling is the reported bound there.
        """
        self.cantor._require_resolution(eps)
        self.cantor._check_grid(theta)
        ticks, bound = self._bump_ticks(theta.ticks, eps)
        return BumpValue(math.ldexp(float(ticks), -self.bits), bound, ticks)

    # -- radial ------------------------------------------------------------

    def _radial_ticks(self, theta_ticks: int, rho_ticks: int, eps: float) -> int:
        if rho_ticks < 0:
            raise NegativeRadius(f"rho_ticks={rho_ticks}")
        R = 1 << self.bits
        half = R >> 1
        quarter = R >> 2
        if rho_ticks <= half:
            return rho_ticks // 2
        pi_t, _ = self._bump_ticks(theta_ticks, eps)
        if rho_ticks <= R:
            # (3/4 - Pi) * (2 rho - 1) + 1/4, rounded once.
            slope = 3 * quarter - pi_t
            x = 2 * rho_ticks - R
            return ((slope * x + half) >> self.bits) + quarter
        return rho_ticks // 2 + half - pi_t

    def radial(self, theta: CirclePoint, rho, eps: float = DEFAULT_EPS) -> float:
        """R(theta, rho) as a float; exact branch arithmetic underneath."""
        from .circle import as_tick_count

        self.cantor._require_resolution(eps)
        self.cantor._check_grid(theta)
        rho_t = rho if isinstance(rho, int) else as_tick_count(rho, self.bits)
        if rho_t < 0:
            raise NegativeRadius(f"rho={rho!r}")
        return math.ldexp(float(self._radial_ticks(theta.ticks, rho_t, eps)), -self.bits)

    # -- iteration -----------------------------------------------------------

    def step(self, p: PlanarPoint, eps: float = DEFAULT_EPS) -> PlanarPoint:
        """One application of h: rotate-and-contract."""
        self.cantor._require_resolution(eps)
        self.cantor._check_grid(p.theta)
        theta1 = self.denjoy.eval(p.theta, eps)
        rho1 = self._radial_ticks(p.theta.ticks, p.rho_ticks, eps)
        return PlanarPoint(theta1, rho1)

    def planar_orbit(
        self,
        p: PlanarPoint,
        steps: int,
        eps: float = DEFAULT_EPS,
        error_cap: Optional[float] = None,
    ) -> PlanarOrbit:
        """Forward orbit under h with a conservative accumulated error bound.

        Per-step error is at most eps in each coordinate; the radial branch
        slopes never exceed 2 and the angular slope is tracked, so the bound
        composes as steps * eps * max(angular slope, 2).
        """
        if steps < 0:
            raise ValueError("steps must be >= 0")
        self.cantor._require_resolution(eps)
        points = [p]
        cur = p
        max_slope = 2.0
        for step in range(1, steps + 1):
            _, slope = self.denjoy._eval_ticks(cur.theta.ticks)
            max_slope = max(max_slope, slope)
            bound = step * eps * max_slope
            if error_cap is not None and bound > error_cap:
                raise ErrorBudgetExceeded(
                    f"planar orbit error bound {bound:.3e} exceeds cap at step {step}",
                    bound,
                    error_cap,
                )
            cur = self.step(cur, eps)
            points.append(cur)
        return PlanarOrbit(points=tuple(points), error_bound=steps * eps * max_slope)

    # -- symmetry ------------------------------------------------------------

    def planar_equivariance_residual(
        self, samples: int, eps: float = DEFAULT_EPS, seed: int = 0
    ) -> float:
        """max over samples and sectors of the h / rotation commutator.

        Sample points mix radii across all three radial branches (rho up to 2)
        and the residual metric is max(angular distance, |delta rho|).
        """
        self.cantor._require_resolution(eps)
        rng = random.Random(f"planar-equivariance:{seed}")
        R = 1 << self.bits
        q = self.cantor.sector_ticks
        worst = 0
        for _ in range(samples):
            theta = rng.randrange(R)
            rho = rng.randrange(2 * R)
            base_theta, _ = self.denjoy._eval_ticks(theta)
            base_rho = self._radial_ticks(theta, rho, eps)
            for k in range(1, self.m):
                shifted = (theta + k * q) % R
                t2, _ = self.denjoy._eval_ticks(shifted)
                r2 = self._radial_ticks(shifted, rho, eps)
                dt = (t2 - (base_theta + k * q)) % R
                worst = max(worst, min(dt, R - dt), abs(r2 - base_rho))
        return math.ldexp(float(worst), -self.bits)
