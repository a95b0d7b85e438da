"""Verification suites: named residual checks against stated bounds.

Each check recomputes an invariant of the built system from its public
behavior and reports (residual, bound, passed). Residuals are worst cases
over deterministic seeded samples or exhaustive sweeps, so a report with a
fixed seed is byte-identical across runs. Wall-clock timings would break
that, so they are collected only on request.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .circle import CirclePoint, cyclic_order, dist_ticks, rotate_ticks
from .config import System, canonical_json, config_hash
from .errors import SymdenjoyError
from .planar import PlanarPoint

SCHEMA_REPORT = "symdenjoy/verify-report/1"

SUITES = ("cantor", "denjoy", "planar")


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[CheckResult, ...]
    passed: bool
    config_hash: str
    eps: float
    samples: int
    seed: int
    suites: tuple[str, ...]
    durations: Optional[dict] = None

    def to_dict(self) -> dict:
        doc = {
            "schema": SCHEMA_REPORT,
            "config_hash": self.config_hash,
            "eps": repr(self.eps),
            "samples": self.samples,
            "seed": self.seed,
            "suites": list(self.suites),
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "residual": repr(c.residual),
                    "bound": repr(c.bound),
                    "passed": c.passed,
                }
                for c in self.checks
            ],
        }
        if self.durations is not None:
            doc["durations"] = self.durations
        return doc

    def to_json(self) -> bytes:
        return canonical_json(self.to_dict())

    def failed_checks(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


def _ldexp(ticks: int, bits: int) -> float:
    return math.ldexp(float(ticks), -bits)


# -- cantor suite -----------------------------------------------------------


def _check_measure(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Closed-form remaining measure vs direct summation, decay to zero.

    The remaining measure after depth N must equal 1 - sum of tabulated
    weights, decrease strictly, and tend to zero (total gap mass exactly 1).
    """
    sched = system.cantor.schedule
    worst = Fraction(0)
    ok = True
    prev = None
    for n in range(0, 21):
        direct = sum(sched.weight(i) for i in range(-n, n + 1))
        closed = sched.partial_mass(n)
        worst = max(worst, abs(direct - closed))
        remaining = system.cantor.measure_remaining_exact(n)
        if prev is not None and not remaining < prev:
            ok = False
        prev = remaining
    defect = abs(1 - sched.mass)
    residual = float(worst + defect)
    return CheckResult("cantor.measure", residual, 0.0, ok and residual == 0.0)


def _check_gap_symmetry(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """gap(k+1, n) must be gap(k, n) rotated by 1/m, endpoint-wise."""
    ca = system.cantor
    worst = 0
    for n in range(-ca.depth, ca.depth + 1):
        base = ca.gap((0, n), eps)
        for k in range(1, ca.m):
            expect_start = rotate_ticks(base.start, k * ca.sector_ticks)
            expect_end = rotate_ticks(base.end, k * ca.sector_ticks)
            got = ca.gap((k, n), eps)
            worst = max(
                worst,
                dist_ticks(got.start, expect_start),
                dist_ticks(got.end, expect_end),
            )
    return CheckResult(
        "cantor.gap_symmetry", _ldexp(worst, ca.bits), 2 * eps, _ldexp(worst, ca.bits) <= 2 * eps
    )


def _check_gap_disjointness(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Tabulated gaps are pairwise disjoint and fit inside one turn."""
    ca = system.cantor
    gaps = list(ca.gaps())
    overlap = 0
    total = 0
    R = 1 << ca.bits
    for (_, a), (_, b) in zip(gaps, gaps[1:]):
        total += a.length_ticks
        gap_between = (b.start.ticks - a.start.ticks) % R
        if a.length_ticks > gap_between:
            overlap = max(overlap, a.length_ticks - gap_between)
    total += gaps[-1][1].length_ticks
    if total > R:
        overlap = max(overlap, total - R)
    return CheckResult("cantor.gap_disjointness", _ldexp(overlap, ca.bits), 0.0, overlap == 0)


def _check_gap_order(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Cyclic order of gap interiors matches cyclic order of base points."""
    ca = system.cantor
    rng = random.Random(f"gap-order:{seed}")
    level = min(ca.depth, 3)
    indexed = [(idx, arc) for idx, arc in ca.gaps(level)]
    mismatches = 0
    trials = min(samples, 500)
    for _ in range(trials):
        picks = rng.sample(range(len(indexed)), 3)
        base = [ca.base_point(indexed[i][0]) for i in picks]
        mids = [indexed[i][1].midpoint() for i in picks]
        try:
            if cyclic_order(*base) != cyclic_order(*mids):
                mismatches += 1
        except SymdenjoyError:
            continue
    return CheckResult("cantor.gap_order", float(mismatches), 0.0, mismatches == 0)


def _check_stage_structure(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Stage arc counts m(2j - 1), nesting, and order-m symmetry."""
    ca = system.cantor
    ok = True
    worst = 0
    top = min(4, ca.depth)
    prev_arcs = None
    for j in range(0, top + 1):
        arcs = ca.stage(j, eps)
        if j == 0:
            if not (len(arcs) == 1 and arcs[0].full):
                ok = False
        else:
            if len(arcs) != ca.m * (2 * j - 1):
                ok = False
            if prev_arcs is not None and not prev_arcs[0].full:
                # Nesting: every arc of stage j sits inside some arc of stage j-1.
                for a in arcs:
                    if not any(p.contains(a.start) and p.contains(a.end) for p in prev_arcs):
                        ok = False
                        break
            # Rotation by 1/m permutes the stage arcs.
            start_set = sorted(a.start.ticks for a in arcs)
            rotated = sorted(
                (t + ca.sector_ticks) % (1 << ca.bits) for t in start_set
            )
            for r in rotated:
                nearest = min(
                    min((r - s) % (1 << ca.bits), (s - r) % (1 << ca.bits))
                    for s in start_set
                )
                worst = max(worst, nearest)
        prev_arcs = arcs
    resid = _ldexp(worst, ca.bits)
    return CheckResult("cantor.stage_structure", resid, 2 * eps, ok and resid <= 2 * eps)


# -- denjoy suite -----------------------------------------------------------


def _check_lift(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Degree one and monotonicity of the lift."""
    dj = system.denjoy
    rng = random.Random(f"lift:{seed}")
    R = 1 << dj.bits
    worst = 0
    ok = True
    xs = sorted(rng.randrange(R) for _ in range(min(samples, 256)))
    prev = None
    for x in xs:
        lv = dj.lift_eval(Fraction(x, R), eps)
        shifted = dj.lift_eval(Fraction(x + R, R), eps)
        worst = max(worst, abs(shifted.ticks - lv.ticks - R))
        if prev is not None and lv.ticks < prev:
            ok = False
        prev = lv.ticks
    return CheckResult("denjoy.lift", _ldexp(worst, dj.bits), 0.0, ok and worst == 0)


def _check_gap_action(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """f maps each tabulated gap onto the next-level gap, endpoints to endpoints.

    Exact in the interior levels; at the deepest tabulated level an adjacent
    below-resolution gap can displace an endpoint image by its own (sub-eps)
    length, so the tolerance is the evaluation contract, not zero.
    """
    ca = system.cantor
    dj = system.denjoy
    worst = 0
    for n in range(-ca.depth, ca.depth):
        for k in range(ca.m):
            src = ca.gap((k, n), eps)
            dst = ca.gap((k, n + 1), eps)
            worst = max(
                worst,
                dist_ticks(dj.eval(src.start, eps), dst.start),
                dist_ticks(dj.eval(src.end, eps), dst.end),
            )
    resid = _ldexp(worst, ca.bits)
    return CheckResult("denjoy.gap_action", resid, 2 * eps, resid <= 2 * eps)


def _check_equivariance(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    resid = system.denjoy.equivariance_residual(samples, eps, seed)
    return CheckResult("denjoy.equivariance", resid, 4 * eps, resid <= 4 * eps)


def _check_semiconjugacy(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    resid = system.denjoy.semiconjugacy_residual(samples, eps, seed)
    return CheckResult("denjoy.semiconjugacy", resid, 4 * eps, resid <= 4 * eps)


def _check_rotation_number(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Birkhoff estimates from several starts agree with tau within bound."""
    dj = system.denjoy
    rng = random.Random(f"rotnum:{seed}")
    R = 1 << dj.bits
    iterations = 2000
    worst = 0.0
    bound = 0.0
    tau = Fraction(dj.tau_ticks, R)
    for _ in range(3):
        y = CirclePoint(rng.randrange(R), dj.bits)
        est = dj.rotation_number(y, iterations, eps)
        worst = max(worst, abs(float(est.exact - tau)))
        bound = max(bound, est.bound)
    return CheckResult("denjoy.rotation_number", worst, bound, worst <= bound)


def _check_aperiodicity(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Sampled orbits stay far from returning at small periods."""
    floor, orbit_bound = system.denjoy.periodicity_floor(
        min(samples, 25), 20, eps, seed
    )
    threshold = 10 * orbit_bound
    return CheckResult("denjoy.aperiodicity", floor, threshold, floor > threshold)


def _check_recurrence(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Informational: smallest observed return distance at periods <= 200.

    Denjoy dynamics recur on the Cantor set but gap interiors never return;
    no threshold is asserted, the figure is reported for inspection.
    """
    floor, _ = system.denjoy.periodicity_floor(min(samples, 5), 200, eps, seed)
    return CheckResult("denjoy.recurrence", floor, 0.5, True)


# -- planar suite -----------------------------------------------------------


def _check_seam_agreement(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Adjacent radial branches give identical ticks at the seams."""
    pm = system.planar
    rng = random.Random(f"seam:{seed}")
    R = 1 << pm.bits
    half, quarter = R >> 1, R >> 2
    worst = 0
    for _ in range(min(samples, 512)):
        t = rng.randrange(R)
        # rho = 1/2: the halving branch must hand over the value 1/4.
        lo = pm._radial_ticks(t, half, eps)
        worst = max(worst, abs(lo - quarter))
        # rho = 1: middle branch vs outer branch, computed independently.
        mid = pm._radial_ticks(t, R, eps)
        pi_t, _ = pm._bump_ticks(t, eps)
        hi = R // 2 + half - pi_t
        worst = max(worst, abs(mid - hi))
    return CheckResult("planar.seam_agreement", _ldexp(worst, pm.bits), 0.0, worst == 0)


def _check_radial_continuity(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Small radial moves change R by at most twice as much (plus rounding)."""
    pm = system.planar
    rng = random.Random(f"radial-continuity:{seed}")
    R = 1 << pm.bits
    worst = 0
    delta = 1 << 10
    for _ in range(min(samples, 256)):
        t = rng.randrange(R)
        for seam in (R >> 1, R):
            for d in (-delta, delta):
                a = pm._radial_ticks(t, seam, eps)
                b = pm._radial_ticks(t, seam + d, eps)
                excess = abs(b - a) - 2 * abs(d)
                worst = max(worst, excess)
    bound = _ldexp(4, pm.bits)
    resid = _ldexp(max(worst, 0), pm.bits)
    return CheckResult("planar.radial_continuity", resid, bound, resid <= bound)


def _check_radial_monotone(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """R(theta, .) strictly increases along a coarse radial grid."""
    pm = system.planar
    rng = random.Random(f"radial-monotone:{seed}")
    R = 1 << pm.bits
    violations = 0
    grid = [R * j // 64 for j in range(0, 129)]
    for _ in range(min(samples, 64)):
        t = rng.randrange(R)
        prev = None
        for rho in grid:
            val = pm._radial_ticks(t, rho, eps)
            if prev is not None and val <= prev:
                violations += 1
            prev = val
    return CheckResult("planar.radial_monotone", float(violations), 0.0, violations == 0)


def _check_bump_shape(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Pi vanishes at gap endpoints, peaks at pi_cap, stays positive inside."""
    pm = system.planar
    ca = system.cantor
    worst_endpoint = 0
    sup = 0.0
    positive_ok = True
    for idx, arc in ca.gaps():
        v_start = pm.bump(arc.start, eps)
        worst_endpoint = max(worst_endpoint, v_start.ticks)
        if arc.length_ticks >= ca._eps_slot_ticks(eps):
            mid = pm.bump(arc.midpoint(), eps)
            sup = max(sup, mid.value)
            if mid.ticks <= 0:
                positive_ok = False
    cap = float(pm.pi_cap)
    over = max(0.0, sup - cap)
    resid = _ldexp(worst_endpoint, pm.bits) + over
    ok = worst_endpoint == 0 and positive_ok and over <= _ldexp(4, pm.bits)
    return CheckResult("planar.bump_shape", resid, _ldexp(4, pm.bits), ok)


def _check_bump_symmetry(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Pi is invariant under rotation by 1/m."""
    pm = system.planar
    ca = system.cantor
    rng = random.Random(f"bump-symmetry:{seed}")
    R = 1 << pm.bits
    worst = 0
    for _ in range(samples):
        t = rng.randrange(R)
        a, _ = pm._bump_ticks(t, eps)
        b, _ = pm._bump_ticks((t + ca.sector_ticks) % R, eps)
        worst = max(worst, abs(a - b))
    resid = _ldexp(worst, pm.bits)
    return CheckResult("planar.bump_symmetry", resid, 2 * eps, resid <= 2 * eps)


def _check_planar_equivariance(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    resid = system.planar.planar_equivariance_residual(samples, eps, seed)
    return CheckResult("planar.equivariance", resid, 6 * eps, resid <= 6 * eps)


def _check_contraction(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Radius halves exactly from 1/2; orbits over gaps fall in from far out.

    A far orbit is started over a gap interior: over the Cantor set itself the
    unit circle is invariant (Pi = 0 there), so only gap angles, where the
    bump bites, are expected to contract through the middle branch.
    """
    pm = system.planar
    ca = system.cantor
    R = 1 << pm.bits
    theta = CirclePoint(0, pm.bits)
    worst = 0
    orbit = pm.planar_orbit(PlanarPoint(theta, R >> 1), 40, eps)
    for j, pt in enumerate(orbit.points):
        worst = max(worst, abs(pt.rho_ticks - (R >> (j + 1) if j + 1 < pm.bits else 0)))
    origin = pm.step(PlanarPoint(theta, 0), eps)
    worst = max(worst, origin.rho_ticks)
    inside = ca.gap((0, 0), eps).midpoint()
    far = pm.planar_orbit(PlanarPoint(inside, 2 * R), 60, eps)
    ok = far.points[-1].rho_ticks <= (R >> 1)
    return CheckResult("planar.contraction", _ldexp(worst, pm.bits), 0.0, ok and worst == 0)


def _check_invariant_circle(system: System, eps: float, samples: int, seed: int) -> CheckResult:
    """Over near-Cantor angles the unit circle barely moves: |R(theta,1)-1| small."""
    pm = system.planar
    ca = system.cantor
    rng = random.Random(f"invariant-circle:{seed}")
    R = 1 << pm.bits
    worst = 0.0
    bound = 0.0
    ok = True
    for theta in ca.sample_near_cantor(rng, eps, min(samples, 64)):
        val = pm.bump(theta, eps)
        r1 = pm._radial_ticks(theta.ticks, R, eps)
        move = _ldexp(abs(r1 - R), pm.bits)
        cap = val.bound + _ldexp(1, pm.bits)
        worst = max(worst, move)
        bound = max(bound, cap)
        if move > cap:
            ok = False
    return CheckResult("planar.invariant_circle", worst, bound, ok)


_CHECKS = {
    "cantor": (
        _check_measure,
        _check_gap_symmetry,
        _check_gap_disjointness,
        _check_gap_order,
        _check_stage_structure,
    ),
    "denjoy": (
        _check_lift,
        _check_gap_action,
        _check_equivariance,
        _check_semiconjugacy,
        _check_rotation_number,
        _check_aperiodicity,
        _check_recurrence,
    ),
    "planar": (
        _check_seam_agreement,
        _check_radial_continuity,
        _check_radial_monotone,
        _check_bump_shape,
        _check_bump_symmetry,
        _check_planar_equivariance,
        _check_contraction,
        _check_invariant_circle,
    ),
}


def run_verification(
    system: System,
    config,
    suites: Optional[Iterable[str]] = None,
    eps: float = 1e-30,
    samples: int = 400,
    seed: int = 0,
    timings: bool = False,
) -> VerifyReport:
    chosen = tuple(s for s in SUITES if suites is None or s in set(suites))
    if suites is not None:
        unknown = set(suites) - set(SUITES)
        if unknown:
            raise ValueError(f"unknown suite: {sorted(unknown)[0]}")
    results = []
    durations = {} if timings else None
    for suite in chosen:
        for check in _CHECKS[suite]:
            t0 = time.perf_counter()
            results.append(check(system, eps, samples, seed))
            if durations is not None:
                durations[results[-1].name] = f"{time.perf_counter() - t0:.3f}"
    return VerifyReport(
        checks=tuple(results),
        passed=all(c.passed for c in results),
        config_hash=config_hash(config),
        eps=eps,
        samples=samples,
        seed=seed,
        suites=chosen,
        durations=durations,
    )
