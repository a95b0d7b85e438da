"""Gap table and Cantor system: oracles first, structure second.

The main independent oracle recomputes a gap's left endpoint by brute-force
rational summation of the jump function, with none of the table machinery.
"""

from fractions import Fraction
from itertools import combinations
import random

import pytest

from symdenjoy.cantor import (
    NEAR_CANTOR,
    CantorApprox,
    GapSchedule,
    InGap,
    OrbitIndex,
)
from symdenjoy.circle import CirclePoint, cyclic_order, dist_ticks, rotate_ticks
from symdenjoy.errors import ConfigInvalid, DepthExceeded, PrecisionCollision

BITS = 256
R = 1 << BITS
EPS = 1e-30


class TestSchedule:
    def test_exact_small_values(self):
        s = GapSchedule()
        assert s.w0 == Fraction(1, 3)
        assert s.weight(0) == Fraction(1, 3)
        assert s.weight(1) == s.weight(-1) == Fraction(1, 6)
        assert s.partial_mass(0) == Fraction(1, 3)
        assert s.tail_bound(0) == Fraction(2, 3)

    def test_tail_closed_form(self):
        s = GapSchedule()
        for n in range(0, 21):
            assert s.tail_bound(n) == Fraction(2, 3) / 2**n

    def test_partial_matches_direct_sum(self):
        s = GapSchedule(ratio=Fraction(1, 3), mass=Fraction(1))
        for n in range(0, 12):
            direct = sum(s.weight(i) for i in range(-n, n + 1))
            assert direct == s.partial_mass(n)

    def test_truncation_depths(self):
        s = GapSchedule()
        assert s.truncation_depth(1e-10) == 34
        assert s.truncation_depth(1e-20) == 67
        assert s.truncation_depth(1e-30) == 101

    def test_rejects_bad_params(self):
        with pytest.raises(ConfigInvalid):
            GapSchedule(ratio=Fraction(1))
        with pytest.raises(ConfigInvalid):
            GapSchedule(mass=Fraction(0))

    def test_round_trip(self):
        s = GapSchedule(ratio=Fraction(2, 5), mass=Fraction(1))
        assert GapSchedule.from_dict(s.to_dict()) == s


class TestBasePoints:
    def test_origin(self, default_system):
        ca = default_system.cantor
        assert ca.base_point(OrbitIndex(0, 0)).ticks == 0

    def test_half_turn_sector(self, default_system):
        ca = default_system.cantor
        assert ca.base_point(OrbitIndex(1, 0)).ticks == R // 2

    def test_level_one_is_tau(self, default_system):
        ca = default_system.cantor
        assert ca.base_point(OrbitIndex(0, 1)).ticks == ca.tau_ticks

    def test_sector_out_of_range(self, default_system):
        with pytest.raises(ValueError):
            default_system.cantor.base_point(OrbitIndex(2, 0))


class TestJumpOracle:
    """Brute-force rational recomputation of gap placement."""

    def oracle_left_endpoint(self, ca, target, horizon=64):
        tau = Fraction(ca.tau_ticks, R)
        phi = Fraction(ca.phi_ticks, R)
        x_target = (phi + Fraction(target.k, ca.m) + target.n * tau) % 1
        sched = ca.schedule
        total = Fraction(0)
        for n in range(-horizon, horizon + 1):
            weight = sched.weight(n) / ca.m
            for k in range(ca.m):
                x = (phi + Fraction(k, ca.m) + n * tau) % 1
                if x < x_target:
                    total += weight
        return total

    def test_left_endpoint_of_origin_gap_is_zero(self, default_system):
        ca = default_system.cantor
        assert ca.gap_left_endpoint(OrbitIndex(0, 0), EPS).ticks == 0

    def test_left_endpoint_matches_bruteforce(self, default_system):
        ca = default_system.cantor
        for idx in (OrbitIndex(1, 0), OrbitIndex(0, 1), OrbitIndex(1, -2)):
            oracle = self.oracle_left_endpoint(ca, idx)
            got = ca.gap_left_endpoint(idx, EPS).as_fraction()
            # Oracle truncates at |n| <= 64, table renormalizes within eps.
            assert abs(got - oracle) <= Fraction(2, 3) / 2**64 + Fraction(1, 10**29)

    def test_left_endpoint_matches_bruteforce_m3(self, m3_system):
        ca = m3_system.cantor
        for idx in (OrbitIndex(2, 0), OrbitIndex(1, 1)):
            oracle = self.oracle_left_endpoint(ca, idx)
            got = ca.gap_left_endpoint(idx, EPS).as_fraction()
            assert abs(got - oracle) <= Fraction(2, 3) / 2**64 + Fraction(1, 10**29)


class TestGapLengths:
    def test_level_zero_length(self, default_system):
        ca = default_system.cantor
        for k in range(2):
            length = ca.gap_length_fraction(OrbitIndex(k, 0))
            assert abs(length - Fraction(1, 6)) < Fraction(1, 10**30)

    def test_length_is_sector_independent(self, m3_system):
        ca = m3_system.cantor
        for n in (-2, 0, 3):
            lengths = {ca.gap_length_fraction(OrbitIndex(k, n)) for k in range(3)}
            assert len(lengths) == 1

    def test_halving_between_levels(self, default_system):
        ca = default_system.cantor
        for n in range(0, ca.depth):
            a = ca.gap_length_fraction(OrbitIndex(0, n)) * R
            b = ca.gap_length_fraction(OrbitIndex(0, n + 1)) * R
            assert abs(2 * b - a) <= 2
        for n in range(0, -ca.depth, -1):
            a = ca.gap_length_fraction(OrbitIndex(0, n)) * R
            b = ca.gap_length_fraction(OrbitIndex(0, n - 1)) * R
            assert abs(2 * b - a) <= 2

    def test_total_tiles_circle(self, default_system):
        ca = default_system.cantor
        total = sum(arc.length_ticks for _, arc in ca.gaps())
        # Exact tiling up to the wrap slack of < m ticks.
        assert R - ca.m < total <= R


class TestStages:
    @pytest.mark.parametrize("fixture_name", ["default_system", "m3_system"])
    def test_arc_counts(self, request, fixture_name):
        ca = request.getfixturevalue(fixture_name).cantor
        stage0 = ca.stage(0, EPS)
        assert len(stage0) == 1 and stage0[0].full
        for j in range(1, 5):
            assert len(ca.stage(j, EPS)) == ca.m * (2 * j - 1)

    @pytest.mark.parametrize("fixture_name", ["default_system", "m3_system"])
    def test_nesting_and_endpoint_persistence(self, request, fixture_name):
        ca = request.getfixturevalue(fixture_name).cantor
        prev = None
        for j in range(1, 5):
            arcs = ca.stage(j, EPS)
            if prev is not None:
                starts_prev = {a.start.ticks for a in prev}
                starts_now = {a.start.ticks for a in arcs}
                assert starts_prev <= starts_now
                for a in arcs:
                    assert any(p.contains(a.start) and p.contains(a.end) for p in prev)
            prev = arcs

    @pytest.mark.parametrize("fixture_name", ["default_system", "m3_system"])
    def test_rotational_symmetry(self, request, fixture_name):
        ca = request.getfixturevalue(fixture_name).cantor
        for j in range(1, 5):
            arcs = ca.stage(j, EPS)
            starts = sorted(a.start.ticks for a in arcs)
            for a in arcs:
                shifted = (a.start.ticks + ca.sector_ticks) % R
                nearest = min(
                    min((shifted - s) % R, (s - shifted) % R) for s in starts
                )
                assert nearest <= ca.m  # within 2 eps by a huge margin

    def test_depth_exceeded(self, default_system):
        ca = default_system.cantor
        with pytest.raises(DepthExceeded):
            ca.stage(ca.depth + 1, EPS)


class TestGapOrder:
    @pytest.mark.parametrize("fixture_name", ["default_system", "m3_system"])
    def test_exhaustive_small_depth(self, request, fixture_name):
        """Cyclic order of gaps matches cyclic order of their base points."""
        ca = request.getfixturevalue(fixture_name).cantor
        items = [(idx, arc) for idx, arc in ca.gaps(3)]
        for (i1, a1), (i2, a2), (i3, a3) in combinations(items, 3):
            base = (ca.base_point(i1), ca.base_point(i2), ca.base_point(i3))
            mids = (a1.midpoint(), a2.midpoint(), a3.midpoint())
            assert cyclic_order(*base) == cyclic_order(*mids)
            assert cyclic_order(*reversed(base)) == cyclic_order(*reversed(mids))

    def test_disjoint_exhaustive(self, default_system):
        ca = default_system.cantor
        arcs = sorted(
            ((arc.start.ticks, arc.length_ticks) for _, arc in ca.gaps()),
        )
        for (s1, l1), (s2, _) in zip(arcs, arcs[1:]):
            assert s1 + l1 <= s2


class TestCantorFunction:
    def test_collapses_gap_to_base_point(self, default_system):
        ca = default_system.cantor
        for idx, arc in ca.gaps(4):
            target = ca.base_point(idx).ticks
            assert ca.cantor_function(arc.start, EPS).ticks == target
            assert ca.cantor_function(arc.midpoint(), EPS).ticks == target

    def test_monotone_degree_one(self, default_system):
        ca = default_system.cantor
        rng = random.Random(7)
        ys = sorted(rng.randrange(R) for _ in range(400))
        values = [ca.cantor_function(CirclePoint(y), EPS).ticks for y in ys]
        drops = sum(1 for a, b in zip(values, values[1:]) if b < a)
        assert drops <= 1  # at most one wrap through zero

    def test_equivariant(self, default_system):
        ca = default_system.cantor
        rng = random.Random(11)
        for _ in range(200):
            y = CirclePoint(rng.randrange(R))
            left = ca.cantor_function(rotate_ticks(y, ca.sector_ticks), EPS)
            right = rotate_ticks(ca.cantor_function(y, EPS), ca.sector_ticks)
            assert dist_ticks(left, right) <= 2


class TestClassify:
    def test_gap_midpoint(self, default_system):
        ca = default_system.cantor
        mid = ca.gap(OrbitIndex(0, 0), EPS).midpoint()
        got = ca.classify(mid, EPS)
        assert isinstance(got, InGap) and got.index == OrbitIndex(0, 0)

    def test_left_endpoint_is_in_gap(self, default_system):
        ca = default_system.cantor
        start = ca.gap(OrbitIndex(1, 2), EPS).start
        got = ca.classify(start, EPS)
        assert isinstance(got, InGap) and got.index == OrbitIndex(1, 2)

    def test_right_endpoint_backstop(self, default_system):
        """A boundary tick whose own slot is unresolvable still reports the
        resolvable gap it closes."""
        ca = default_system.cantor
        threshold = ca._eps_slot_ticks(EPS)
        found = False
        for i in range(ca.table_size - 1):
            if ca._len[i] >= threshold and ca._len[i + 1] < threshold:
                end = CirclePoint(ca._cum[i + 1])
                got = ca.classify(end, EPS)
                assert isinstance(got, InGap)
                assert got.index == OrbitIndex(ca._k[i], ca._n[i])
                found = True
                break
        assert found

    def test_near_cantor_sampling(self, default_system):
        ca = default_system.cantor
        rng = random.Random(3)
        for y in ca.sample_near_cantor(rng, EPS, 25):
            assert ca.classify(y, EPS) is NEAR_CANTOR

    def test_classify_equivariant(self, default_system):
        ca = default_system.cantor
        rng = random.Random(5)
        for _ in range(100):
            y = CirclePoint(rng.randrange(R))
            got = ca.classify(y, EPS)
            shifted = ca.classify(rotate_ticks(y, ca.sector_ticks), EPS)
            if isinstance(got, InGap):
                k, n = got.index
                assert isinstance(shifted, InGap)
                assert shifted.index == OrbitIndex((k + 1) % ca.m, n)
            else:
                assert shifted is NEAR_CANTOR


class TestMeasure:
    def test_closed_form(self, default_system):
        ca = default_system.cantor
        for n in range(0, 21):
            assert ca.measure_remaining_exact(n) == Fraction(2, 3) / 2**n

    def test_named_values(self, default_system):
        ca = default_system.cantor
        assert ca.measure_remaining_exact(0) == Fraction(2, 3)
        assert ca.measure_remaining_exact(3) == Fraction(1, 12)

    def test_strictly_decreasing_to_zero(self, default_system):
        ca = default_system.cantor
        values = [ca.measure_remaining_exact(n) for n in range(0, 40)]
        assert all(b < a for a, b in zip(values, values[1:]))
        assert values[-1] < Fraction(1, 10**9)


class TestErrorsAndLimits:
    def test_depth_exceeded_on_deep_index(self, default_system):
        with pytest.raises(DepthExceeded):
            default_system.cantor.gap_left_endpoint(OrbitIndex(0, 500), EPS)

    def test_depth_exceeded_on_tiny_eps(self, default_system):
        with pytest.raises(DepthExceeded):
            default_system.cantor.gap(OrbitIndex(0, 0), 1e-300)

    def test_precision_collision(self):
        # A tau within comparison distance of 1/3 collides with the k-shift.
        q3 = (1 << 64) // 3
        tau = Fraction(q3 + 7, 1 << 64)
        with pytest.raises(PrecisionCollision):
            CantorApprox(m=3, tau=tau, depth=4, bits=64, eps=1e-6)


class TestSerialization:
    def test_round_trip_identical_table(self, default_system):
        ca = default_system.cantor
        clone = CantorApprox.from_config(ca.to_config())
        assert clone.config_json() == ca.config_json()
        assert clone._pos == ca._pos
        assert clone._len == ca._len

    def test_config_hash_stable(self, default_system):
        ca = default_system.cantor
        assert ca.config_hash() == CantorApprox.from_config(ca.to_config()).config_hash()
