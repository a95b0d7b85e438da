"""Circle map: exact gap action, lifts, rotation number, aperiodicity."""

from fractions import Fraction
import random

import pytest

from symdenjoy.cantor import OrbitIndex
from symdenjoy.circle import CirclePoint, LiftValue, dist_ticks, rotate_ticks
from symdenjoy.denjoy import PureRotation, estimate_rotation_number
from symdenjoy.errors import ErrorBudgetExceeded

BITS = 256
R = 1 << BITS
EPS = 1e-30


class TestGapAction:
    def test_endpoints_map_exactly(self, default_system):
        """f carries the gap of level n onto the gap of level n + 1."""
        f = default_system.denjoy
        ca = f.cantor
        for k in range(ca.m):
            for n in range(-4, 5):
                src = ca.gap(OrbitIndex(k, n), EPS)
                dst = ca.gap(OrbitIndex(k, n + 1), EPS)
                assert f.eval(src.start, EPS).ticks == dst.start.ticks
                assert f.eval(src.end, EPS).ticks == dst.end.ticks

    def test_endpoints_map_exactly_m3(self, m3_system):
        f = m3_system.denjoy
        ca = f.cantor
        for k in range(3):
            src = ca.gap(OrbitIndex(k, 0), EPS)
            dst = ca.gap(OrbitIndex(k, 1), EPS)
            assert f.eval(src.start, EPS).ticks == dst.start.ticks
            assert f.eval(src.end, EPS).ticks == dst.end.ticks

    def test_interior_is_affine(self, default_system):
        f = default_system.denjoy
        ca = f.cantor
        src = ca.gap(OrbitIndex(0, 0), EPS)
        dst = ca.gap(OrbitIndex(0, 1), EPS)
        # Quarter point of the source lands on the quarter point of the
        # image, up to the single rounding of the affine branch.
        quarter = rotate_ticks(src.start, src.length_ticks // 4)
        expect = (dst.start.ticks + dst.length_ticks // 4) % R
        assert abs(f.eval(quarter, EPS).ticks - expect) <= 2

    def test_near_cantor_semiconjugates_pointwise(self, default_system):
        """On sub-eps gaps P(f(y)) = P(y) + tau to full precision."""
        f = default_system.denjoy
        ca = f.cantor
        rng = random.Random(13)
        for y in ca.sample_near_cantor(rng, EPS, 30):
            left = ca.cantor_function(f.eval(y, EPS), EPS)
            right = rotate_ticks(ca.cantor_function(y, EPS), ca.tau_ticks)
            assert dist_ticks(left, right) <= 4 * EPS * R


class TestLift:
    def test_degree_one_exact(self, default_system):
        f = default_system.denjoy
        rng = random.Random(17)
        for _ in range(50):
            t = rng.randrange(R)
            base = f.lift_eval(LiftValue(t, BITS), EPS)
            up = f.lift_eval(LiftValue(t + R, BITS), EPS)
            assert up.ticks - base.ticks == R

    def test_monotone(self, default_system):
        f = default_system.denjoy
        rng = random.Random(19)
        ts = sorted(rng.randrange(R) for _ in range(200))
        vals = [f.lift_eval(LiftValue(t, BITS), EPS).ticks for t in ts]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_displacement_in_unit_interval(self, default_system):
        f = default_system.denjoy
        rng = random.Random(23)
        for _ in range(100):
            t = rng.randrange(R)
            out = f.lift_eval(LiftValue(t, BITS), EPS)
            assert 0 < out.ticks - t < R

    def test_fractional_part_matches_eval(self, default_system):
        f = default_system.denjoy
        rng = random.Random(29)
        for _ in range(50):
            t = rng.randrange(R)
            lifted = f.lift_eval(LiftValue(t, BITS), EPS)
            direct = f.eval(CirclePoint(t, BITS), EPS)
            assert lifted.ticks % R == direct.ticks


class TestOrbit:
    def test_zero_steps(self, default_system):
        f = default_system.denjoy
        y = CirclePoint(12345, BITS)
        trace = f.orbit(y, 0, EPS)
        assert trace.points == (y,)
        assert trace.error_bound == 0.0

    def test_orbit_tracks_gap_starts(self, default_system):
        f = default_system.denjoy
        ca = f.cantor
        start = ca.gap(OrbitIndex(0, 0), EPS).start
        trace = f.orbit(start, 5, EPS)
        for j, p in enumerate(trace.points):
            assert p.ticks == ca.gap(OrbitIndex(0, j), EPS).start.ticks

    def test_lift_values_strictly_increase(self, default_system):
        f = default_system.denjoy
        trace = f.orbit(CirclePoint(999, BITS), 20, EPS)
        ticks = [lv.ticks for lv in trace.lift_values]
        assert all(a < b for a, b in zip(ticks, ticks[1:]))

    def test_error_budget_enforced(self, default_system):
        f = default_system.denjoy
        with pytest.raises(ErrorBudgetExceeded) as exc:
            f.orbit(CirclePoint(0, BITS), 100, EPS, error_cap=1e-32)
        assert exc.value.bound > exc.value.cap


class TestRotationNumber:
    def test_pure_rotation_is_exact(self, default_system):
        tau = default_system.cantor.tau_ticks
        rot = PureRotation(Fraction(tau, R), BITS)
        est = estimate_rotation_number(rot, CirclePoint(0, BITS), 500, EPS)
        assert est.exact == Fraction(tau, R)

    def test_estimate_within_bound(self, default_system):
        f = default_system.denjoy
        target = Fraction(f.tau_ticks, R)
        for t in (0, R // 7, 3 * R // 5):
            est = f.rotation_number(CirclePoint(t, BITS), 3000, EPS)
            assert abs(est.exact - target) <= est.bound

    def test_bound_halves_with_doubled_iterations(self, default_system):
        f = default_system.denjoy
        y = CirclePoint(R // 3, BITS)
        b1 = f.rotation_number(y, 400, EPS).bound
        b2 = f.rotation_number(y, 800, EPS).bound
        assert 0.45 <= b2 / b1 <= 0.55

    def test_rejects_zero_iterations(self, default_system):
        with pytest.raises(ValueError):
            default_system.denjoy.rotation_number(CirclePoint(0, BITS), 0, EPS)

    def test_decimal_rendering(self, default_system):
        est = default_system.denjoy.rotation_number(CirclePoint(0, BITS), 100, EPS)
        text = est.decimal(40)
        assert text.startswith("0.") and len(text) == 42


class TestSymmetryResiduals:
    def test_equivariance(self, default_system):
        assert default_system.denjoy.equivariance_residual(500, EPS) <= 4 * EPS

    def test_equivariance_m3(self, m3_system):
        assert m3_system.denjoy.equivariance_residual(500, EPS) <= 4 * EPS

    def test_semiconjugacy(self, default_system):
        assert default_system.denjoy.semiconjugacy_residual(300, EPS) <= 4 * EPS

    def test_semiconjugacy_m5(self, m5_system):
        assert m5_system.denjoy.semiconjugacy_residual(300, EPS) <= 4 * EPS

    def test_lift_commutes_with_sector_shift(self, default_system):
        f = default_system.denjoy
        q = f.cantor.sector_ticks
        rng = random.Random(31)
        for _ in range(50):
            t = rng.randrange(R)
            a = f.lift_eval(LiftValue(t + q, BITS), EPS).ticks
            b = f.lift_eval(LiftValue(t, BITS), EPS).ticks + q
            assert abs(a - b) <= 2


class TestAperiodicity:
    def test_no_short_periods(self, default_system):
        floor, bound = default_system.denjoy.periodicity_floor(20, 20, EPS)
        assert floor > 10 * bound

    def test_no_short_periods_m3(self, m3_system):
        floor, bound = m3_system.denjoy.periodicity_floor(10, 15, EPS)
        assert floor > 10 * bound
