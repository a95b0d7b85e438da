"""Denjoy-type circle homeomorphism over a symmetric Cantor system.

The map f sends the gap of base point d(k, n) onto the gap of d(k, n + 1) by
the affine orientation-preserving bijection between them, and the leftover
Cantor set follows the base points themselves. By construction f is a circle
homeomorphism with irrational rotation number tau that commutes with the
rigid rotation by 1/m, and the gap-collapsing Cantor function P semiconjugates
it to the rotation: P o f = R_tau o P. No orbit is dense (gap interiors never
return), which is what makes f a Denjoy counterexample rather than a rotation.

Evaluation works on the finite gap table: inside a tabulated gap whose image
is also tabulated the affine formula is exact integer arithmetic; at the
table's deepest level the image gap is below resolution and the whole gap
collapses to the single boundary tick where its image would sit. Every public
evaluation therefore lands within eps of the true map value.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .cantor import DEFAULT_EPS, CantorApprox
from .circle import (
    AngleLike,
    CirclePoint,
    LiftValue,
    as_tick_count,
    dist_ticks,
    rotate_ticks,
)
from .errors import ErrorBudgetExceeded


@dataclass(frozen=True)
class OrbitTrace:
    """Forward orbit with lift bookkeeping.

    points[j] = f^j(start). lift_values[j] is the matching lift, strictly
    increasing with per-step increments in (0, 1); frac(lift_values[j])
    equals points[j] exactly. error_bound is the conservative accumulated
    evaluation error: steps * eps * max_slope.
    """

    start: CirclePoint
    points: tuple[CirclePoint, ...]
    lift_values: tuple[LiftValue, ...]
    error_bound: float
    max_slope: float


@dataclass(frozen=True)
class Estimate:
    """Rotation number estimate with an a-priori error bound."""

    estimate: float
    bound: float
    exact: Fraction

    def decimal(self, places: int = 40) -> str:
        from .circle import fixed_decimal

        return fixed_decimal(self.exact, places)


class PureRotation:
    """Test double: the rigid rotation by tau on the same grid."""

    def __init__(self, tau: AngleLike, bits: int):
        from .cantor import resolve_angle

        self.bits = bits
        self.tau_ticks = resolve_angle(tau, bits)

    def _eval_ticks(self, y: int) -> tuple[int, float]:
        return (y + self.tau_ticks) % (1 << self.bits), 1.0


class DenjoyMap:
    """Circle homeomorphism permuting the gaps of a CantorApprox."""

    def __init__(self, cantor: CantorApprox):
        self.cantor = cantor

    @property
    def m(self) -> int:
        return self.cantor.m

    @property
    def bits(self) -> int:
        return self.cantor.bits

    @property
    def tau_ticks(self) -> int:
        return self.cantor.tau_ticks

    # -- evaluation -------------------------------------------------------

    def _eval_ticks(self, y: int) -> tuple[int, float]:
        """Image tick and local affine slope."""
        ca = self.cantor
        R = 1 << ca.bits
        i = ca._slot(y)
        if i == ca.table_size:
            x = ca._slack_pullback(y)
            return ca._jump((x + ca.tau_ticks) % R), 1.0
        k, n = ca._k[i], ca._n[i]
        j = ca._slot_of_index.get((k, n + 1))
        if j is None:
            # Image gap below table resolution: collapse to its location.
            return ca._jump((ca._pos[i] + ca.tau_ticks) % R), 1.0
        off = y - ca._cum[i]
        src, dst = ca._len[i], ca._len[j]
        return ca._cum[j] + (off * dst) // src, dst / src

    def eval(self, y: CirclePoint, eps: float = DEFAULT_EPS) -> CirclePoint:
        """f(y) within eps of the true Denjoy image."""
        self.cantor._require_resolution(eps)
        self.cantor._check_grid(y)
        t, _ = self._eval_ticks(y.ticks)
        return CirclePoint(t % (1 << self.bits), self.bits)

    def lift_eval(self, x: Union[AngleLike, LiftValue], eps: float = DEFAULT_EPS) -> LiftValue:
        """Degree-one lift F with F(x + 1) = F(x) + 1 exactly.

        The fractional image comes from `eval`; the integer part advances by
        the per-step displacement (f(y) - y) mod 1, which for a fixed-point
        free circle homeomorphism always lies in (0, 1).
        """
        self.cantor._require_resolution(eps)
        if isinstance(x, LiftValue):
            if x.bits != self.bits:
                raise ValueError("lift value on a different precision grid")
            total = x.ticks
        else:
            total = as_tick_count(x, self.bits)
        R = 1 << self.bits
        y = total % R
        t, _ = self._eval_ticks(y)
        disp = (t - y) % R
        return LiftValue(total + disp, self.bits)

    # -- orbits -----------------------------------------------------------

    def orbit(
        self,
        y: CirclePoint,
        steps: int,
        eps: float = DEFAULT_EPS,
        error_cap: Optional[float] = None,
    ) -> OrbitTrace:
        """Forward orbit y, f(y), ..., f^steps(y) with lift bookkeeping."""
        if steps < 0:
            raise ValueError("steps must be >= 0")
        self.cantor._require_resolution(eps)
        self.cantor._check_grid(y)
        R = 1 << self.bits
        points = [y]
        lifts = [LiftValue(y.ticks, self.bits)]
        cur = y.ticks
        total = y.ticks
        max_slope = 1.0
        for step in range(1, steps + 1):
            nxt, slope = self._eval_ticks(cur)
            max_slope = max(max_slope, slope)
            bound = step * eps * max_slope
            if error_cap is not None and bound > error_cap:
                raise ErrorBudgetExceeded(
                    f"orbit error bound {bound:.3e} exceeds cap at step {step}",
                    bound,
                    error_cap,
                )
            disp = (nxt - cur) % R
            total += disp
            cur = nxt % R
            points.append(CirclePoint(cur, self.bits))
            lifts.append(LiftValue(total, self.bits))
        return OrbitTrace(
            start=y,
            points=tuple(points),
            lift_values=tuple(lifts),
            error_bound=steps * eps * max_slope,
            max_slope=max_slope,
        )

    def rotation_number(
        self,
        y: CirclePoint,
        iterations: int,
        eps: float = DEFAULT_EPS,
        error_cap: Optional[float] = None,
    ) -> Estimate:
        """Birkhoff estimate (F^N(y) - y) / N with bound 1/N + eps * max_slope."""
        return estimate_rotation_number(self, y, iterations, eps, error_cap)

    # -- residual diagnostics ----------------------------------------------

    def equivariance_residual(
        self, samples: int, eps: float = DEFAULT_EPS, seed: int = 0
    ) -> float:
        """max over sampled y of dist(f(y + 1/m), f(y) + 1/m)."""
        self.cantor._require_resolution(eps)
        rng = random.Random(f"equivariance:{seed}")
        R = 1 << self.bits
        q = self.cantor.sector_ticks
        worst = 0
        for _ in range(samples):
            y = rng.randrange(R)
            a, _ = self._eval_ticks((y + q) % R)
            b, _ = self._eval_ticks(y)
            d = (a - (b + q)) % R
            worst = max(worst, min(d, R - d))
        return math.ldexp(float(worst), -self.bits)

    def semiconjugacy_residual(
        self, samples: int, eps: float = DEFAULT_EPS, seed: int = 0
    ) -> float:
        """max over sampled y of dist(P(f(y)), P(y) + tau)."""
        self.cantor._require_resolution(eps)
        rng = random.Random(f"semiconjugacy:{seed}")
        ca = self.cantor
        R = 1 << self.bits
        worst = 0
        for _ in range(samples):
            y = CirclePoint(rng.randrange(R), self.bits)
            left = ca.cantor_function(self.eval(y, eps), eps)
            right = rotate_ticks(ca.cantor_function(y, eps), ca.tau_ticks)
            worst = max(worst, dist_ticks(left, right))
        return math.ldexp(float(worst), -self.bits)

    def periodicity_floor(
        self,
        samples: int,
        max_period: int,
        eps: float = DEFAULT_EPS,
        seed: int = 0,
    ) -> tuple[float, float]:
        """(min return distance, orbit error bound) over sampled y, q <= max_period.

        A positive separation many times the bound is evidence that no
        sampled point is periodic at any tested period.
        """
        rng = random.Random(f"periodicity:{seed}")
        R = 1 << self.bits
        best = R
        bound = 0.0
        for _ in range(samples):
            y0 = rng.randrange(R)
            trace = self.orbit(CirclePoint(y0, self.bits), max_period, eps)
            bound = max(bound, trace.error_bound)
            for q in range(1, max_period + 1):
                best = min(best, dist_ticks(trace.points[q], trace.points[0]))
        return math.ldexp(float(best), -self.bits), bound


def estimate_rotation_number(
    map_like,
    y: CirclePoint,
    iterations: int,
    eps: float = DEFAULT_EPS,
    error_cap: Optional[float] = None,
) -> Estimate:
    """Rotation number of any grid map exposing _eval_ticks.

    Works for DenjoyMap and for the PureRotation test double. The returned
    bound 1/N + eps * max_slope dominates |estimate - true rotation number|:
    the 1/N term is the a-priori Birkhoff bound for circle homeomorphisms,
    the second term covers accumulated evaluation error.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    R = 1 << map_like.bits
    cur = y.ticks
    winding = 0
    max_slope = 1.0
    for step in range(1, iterations + 1):
        nxt, slope = map_like._eval_ticks(cur)
        max_slope = max(max_slope, slope)
        bound = 1.0 / iterations + eps * max_slope
        if error_cap is not None and step * eps * max_slope > error_cap:
            raise ErrorBudgetExceeded(
                f"rotation number error bound exceeds cap at step {step}",
                step * eps * max_slope,
                error_cap,
            )
        winding += (nxt - cur) % R
        cur = nxt % R
    exact = Fraction(winding, iterations * R)
    return Estimate(estimate=float(exact), bound=1.0 / iterations + eps * max_slope, exact=exact)
