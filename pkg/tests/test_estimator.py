"""Estimator operations: examples frozen from independent oracles, plus invariants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import dense_grid_oracle, random_sample_set
from ramprisk import (
    Direction,
    EmptySampleError,
    InvalidArgumentError,
    MarginVector,
    RampQuery,
    SampleSet,
    Solver,
    WassersteinConfig,
    dual_norm_scale,
    erp,
    estimate,
    radius_from_confidence,
    ramp_margins,
    solve_worst_case,
    sweep,
    worst_case_objective,
)

WORKED_PAIRS = SampleSet.from_tuples([(2.0, -1.0), (0.0, 0.0), (-3.0, 1.0)])


class TestRampMargins:
    def test_down(self):
        mv = ramp_margins(SampleSet.from_tuples([(1.0, 0.0)]), Direction.DOWN, 3.0)
        assert mv.margins.tolist() == [2.0]

    def test_up(self):
        mv = ramp_margins(SampleSet.from_tuples([(1.0, 0.0)]), Direction.UP, 3.0)
        assert mv.margins.tolist() == [4.0]

    def test_three_pairs(self):
        mv = ramp_margins(WORKED_PAIRS, Direction.DOWN, 1.0)
        assert mv.margins.tolist() == [-2.0, 1.0, 5.0]
        assert mv.count == 3

    def test_empty_samples(self):
        with pytest.raises(EmptySampleError):
            ramp_margins(SampleSet(()), Direction.DOWN, 1.0)

    def test_non_finite_threshold(self):
        with pytest.raises(InvalidArgumentError):
            ramp_margins(WORKED_PAIRS, Direction.DOWN, math.inf)


class TestMarginVector:
    def test_array_protocol(self):
        mv = MarginVector(np.array([1.0, -2.0]))
        assert np.asarray(mv).tolist() == [1.0, -2.0]
        assert len(mv) == 2
        assert list(mv) == [1.0, -2.0]

    def test_read_only(self):
        mv = MarginVector(np.array([1.0]))
        with pytest.raises(ValueError):
            mv.margins[0] = 2.0

    def test_rejects_empty_and_non_finite(self):
        with pytest.raises(EmptySampleError):
            MarginVector(np.array([]))
        with pytest.raises(InvalidArgumentError):
            MarginVector(np.array([1.0, math.nan]))


class TestDualNormScale:
    def test_orders(self):
        assert dual_norm_scale(1.0) == 1.0
        assert dual_norm_scale(math.inf) == 2.0
        assert dual_norm_scale(2.0) == pytest.approx(math.sqrt(2.0), abs=1e-15)

    def test_rejects_below_one(self):
        with pytest.raises(InvalidArgumentError):
            dual_norm_scale(0.99)
        with pytest.raises(InvalidArgumentError):
            dual_norm_scale(math.nan)


class TestRadiusRule:
    def test_reference_value(self):
        assert radius_from_confidence(0.9, 200) == pytest.approx(
            0.01151292546497023, abs=1e-15
        )

    def test_confidence_ratio_pattern(self):
        base = radius_from_confidence(0.9, 200)
        assert radius_from_confidence(0.99, 200) / base == pytest.approx(2.0, rel=1e-9)
        assert radius_from_confidence(0.999, 200) / base == pytest.approx(3.0, rel=1e-9)

    def test_vanishing_confidence(self):
        assert radius_from_confidence(1e-12, 50) == pytest.approx(0.0, abs=1e-10)

    def test_validation(self):
        for alpha in (0.0, 1.0, -0.5, math.nan):
            with pytest.raises(InvalidArgumentError):
                radius_from_confidence(alpha, 10)
        with pytest.raises(InvalidArgumentError):
            radius_from_confidence(0.9, 0)

    def test_strictly_decreasing_in_samples(self):
        values = [radius_from_confidence(0.9, i) for i in range(1, 500)]
        assert all(a > b for a, b in zip(values, values[1:]))


class TestSolveWorstCase:
    def test_all_ramping(self):
        value, gamma, stop = solve_worst_case([-1.0, -5.0], 0.1, 1.0)
        assert value == 0.0 and gamma == 0.0 and stop is None

    def test_zero_radius_counts_positive_margins(self):
        value, _, _ = solve_worst_case([2.0, 1.0, -1.0], 0.0, 1.0)
        assert value == pytest.approx(2.0 / 3.0, abs=1e-15)

    def test_worked_instance(self):
        value, gamma, stop = solve_worst_case([2.0, 1.0, -1.0], 0.1, 1.0)
        assert value == pytest.approx(17.0 / 30.0, abs=1e-12)
        assert gamma == pytest.approx(1.0, abs=1e-12)
        assert stop == 1

    def test_worked_instance_matches_grid_oracle(self):
        value, gamma, _ = solve_worst_case([2.0, 1.0, -1.0], 0.1, 1.0)
        oracle_value, oracle_gamma = dense_grid_oracle([2.0, 1.0, -1.0], 0.1, 1.0)
        assert value == pytest.approx(oracle_value, abs=1e-5)
        assert gamma == pytest.approx(oracle_gamma, abs=1e-4)

    def test_zero_margin_is_not_positive(self):
        # a sample exactly on the boundary counts as a ramp: no mass recoverable
        value, _, _ = solve_worst_case([0.0, -1.0], 0.0, 1.0)
        assert value == 0.0

    def test_single_sample(self):
        value, gamma, stop = solve_worst_case([2.0], 0.1, 1.0)
        assert value == pytest.approx(0.95, abs=1e-15)
        assert gamma == pytest.approx(0.5, abs=1e-15)
        assert stop == 0

    def test_large_radius_gives_zero(self):
        value, gamma, stop = solve_worst_case([2.0, 1.0], 10.0, 1.0)
        assert value == 0.0 and gamma == 0.0 and stop is None

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            solve_worst_case([1.0], -0.1, 1.0)
        with pytest.raises(InvalidArgumentError):
            solve_worst_case([1.0], 0.1, 0.0)
        with pytest.raises(EmptySampleError):
            solve_worst_case([], 0.1, 1.0)

    def test_random_instances_match_grid_oracle(self):
        rng = np.random.default_rng(20240811)
        for _ in range(60):
            n = int(rng.integers(1, 9))
            # keep positive margins away from 0 so gamma* stays on the grid
            margins = rng.uniform(0.5, 8.0, n) * rng.choice([-1.0, 1.0], n)
            radius = float(rng.uniform(0.0, 0.8))
            scale = float(rng.choice([1.0, math.sqrt(2.0), 2.0]))
            value, _, _ = solve_worst_case(margins, radius, scale)
            oracle_value, _ = dense_grid_oracle(margins, radius, scale, hi=6.0)
            assert value == pytest.approx(oracle_value, abs=2e-5)


class TestErp:
    def test_worked_instance(self):
        assert erp(WORKED_PAIRS, RampQuery(Direction.DOWN, 1.0)) == pytest.approx(1 / 3)

    def test_below_min_threshold_everything_ramps(self):
        assert erp(WORKED_PAIRS, RampQuery(Direction.DOWN, -100.0)) == 1.0

    def test_boundary_counts_as_ramp(self):
        samples = SampleSet.from_tuples([(0.0, 0.0)] * 5)
        assert erp(samples, RampQuery(Direction.DOWN, 0.0)) == 1.0

    def test_empty(self):
        with pytest.raises(EmptySampleError):
            erp(SampleSet(()), RampQuery(Direction.DOWN, 0.0))


class TestEstimate:
    def test_no_ramp_no_budget(self):
        samples = SampleSet.from_tuples([(0.0, 0.0)] * 10)
        result = estimate(
            samples,
            RampQuery(Direction.DOWN, 100.0),
            WassersteinConfig(p=1.0, radius=0.0),
        )
        assert result.ramp_probability == 0.0

    def test_worked_instance_closed_form(self):
        result = estimate(
            WORKED_PAIRS,
            RampQuery(Direction.DOWN, 1.0),
            WassersteinConfig(p=1.0, radius=0.1),
        )
        assert result.ramp_probability == pytest.approx(13.0 / 30.0, abs=1e-12)
        assert result.inner_value == pytest.approx(17.0 / 30.0, abs=1e-12)
        assert result.gamma_star == pytest.approx(1.0, abs=1e-12)
        assert result.solver is Solver.CLOSED_FORM

    def test_worked_instance_lp_oracle(self):
        result = estimate(
            WORKED_PAIRS,
            RampQuery(Direction.DOWN, 1.0),
            WassersteinConfig(p=1.0, radius=0.1),
            solver=Solver.LP_ORACLE,
        )
        assert result.ramp_probability == pytest.approx(13.0 / 30.0, abs=1e-10)
        assert result.solver is Solver.LP_ORACLE

    def test_zero_radius_equals_erp(self):
        rng = np.random.default_rng(7)
        cfg = WassersteinConfig(p=1.0, radius=0.0)
        for _ in range(50):
            samples = random_sample_set(rng)
            threshold = float(rng.uniform(-30, 30))
            for direction in Direction:
                query = RampQuery(direction, threshold)
                robust = estimate(samples, query, cfg).ramp_probability
                assert robust == pytest.approx(erp(samples, query), abs=1e-12)

    def test_empty_samples(self):
        with pytest.raises(EmptySampleError):
            estimate(
                SampleSet(()),
                RampQuery(Direction.DOWN, 0.0),
                WassersteinConfig(p=1.0, radius=0.0),
            )


pair_lists = st.lists(
    st.tuples(
        st.floats(min_value=-50, max_value=50, allow_nan=False),
        st.floats(min_value=-50, max_value=50, allow_nan=False),
    ),
    min_size=1,
    max_size=25,
)
thresholds_st = st.floats(min_value=-60, max_value=60, allow_nan=False)
radii_st = st.floats(min_value=0.0, max_value=2.0, allow_nan=False)


class TestInvariants:
    @settings(max_examples=150, deadline=None, derandomize=True)
    @given(pair_lists, thresholds_st, radii_st, radii_st)
    def test_radius_monotonicity(self, pairs, threshold, r1, r2):
        lo, hi = sorted((r1, r2))
        samples = SampleSet.from_tuples(pairs)
        query = RampQuery(Direction.DOWN, threshold)
        small = estimate(samples, query, WassersteinConfig(p=1.0, radius=lo))
        large = estimate(samples, query, WassersteinConfig(p=1.0, radius=hi))
        assert large.ramp_probability >= small.ramp_probability - 1e-12
        assert large.inner_value <= small.inner_value + 1e-12

    @settings(max_examples=150, deadline=None, derandomize=True)
    @given(pair_lists, thresholds_st, radii_st)
    def test_bounds(self, pairs, threshold, radius):
        samples = SampleSet.from_tuples(pairs)
        query = RampQuery(Direction.DOWN, threshold)
        result = estimate(samples, query, WassersteinConfig(p=1.0, radius=radius))
        empirical = erp(samples, query)
        assert empirical - 1e-12 <= result.ramp_probability <= 1.0
        assert 0.0 <= result.inner_value <= 1.0 - empirical + 1e-12

    @settings(max_examples=150, deadline=None, derandomize=True)
    @given(pair_lists, thresholds_st, radii_st)
    def test_direction_antisymmetry(self, pairs, threshold, radius):
        samples = SampleSet.from_tuples(pairs)
        negated = SampleSet.from_tuples([(-a, -b) for a, b in pairs])
        cfg = WassersteinConfig(p=1.0, radius=radius)
        down = estimate(samples, RampQuery(Direction.DOWN, threshold), cfg)
        up = estimate(negated, RampQuery(Direction.UP, threshold), cfg)
        assert down.ramp_probability == up.ramp_probability  # exact

    # Translation invariance is an exact-arithmetic identity; rounding can
    # flip a margin across the ramp boundary for adversarial reals.  Dyadic
    # inputs keep every sum exact, so the estimates must agree bit-for-bit.
    dyadic = st.integers(min_value=-3200, max_value=3200).map(lambda k: k / 64.0)

    @settings(max_examples=150, deadline=None, derandomize=True)
    @given(
        st.lists(st.tuples(dyadic, dyadic), min_size=1, max_size=25),
        dyadic,
        radii_st,
        dyadic,
        dyadic,
    )
    def test_translation_invariance(self, pairs, threshold, radius, d1, d2):
        samples = SampleSet.from_tuples(pairs)
        shifted = SampleSet.from_tuples([(a + d1, b + d2) for a, b in pairs])
        cfg = WassersteinConfig(p=1.0, radius=radius)
        base = estimate(samples, RampQuery(Direction.DOWN, threshold), cfg)
        moved = estimate(
            shifted, RampQuery(Direction.DOWN, threshold + (d1 - d2)), cfg
        )
        assert moved.ramp_probability == base.ramp_probability

    @settings(max_examples=100, deadline=None, derandomize=True)
    @given(pair_lists, thresholds_st, radii_st, st.floats(min_value=0.2, max_value=4.0))
    def test_scale_radius_equivalence(self, pairs, threshold, radius, scale):
        samples = SampleSet.from_tuples(pairs)
        margins = ramp_margins(samples, Direction.DOWN, threshold)
        scaled = solve_worst_case(margins, radius, scale)
        rescaled = solve_worst_case(margins, radius * scale, 1.0)
        assert scaled.inner_value == pytest.approx(rescaled.inner_value, abs=1e-12)

    @settings(max_examples=100, deadline=None, derandomize=True)
    @given(pair_lists, thresholds_st, radii_st)
    def test_gamma_objective_concavity(self, pairs, threshold, radius):
        margins = ramp_margins(
            SampleSet.from_tuples(pairs), Direction.DOWN, threshold
        )
        gammas = np.linspace(0.0, 5.0, 41)
        values = [worst_case_objective(margins, radius, 1.0, g) for g in gammas]
        quotients = np.diff(values) / np.diff(gammas)
        assert np.all(np.diff(quotients) <= 1e-9)

    def test_piecewise_linear_in_radius(self):
        # while gamma* is unchanged, the optimum moves linearly with slope gamma*
        rng = np.random.default_rng(3)
        hits = 0
        for _ in range(300):
            samples = random_sample_set(rng)
            threshold = float(rng.uniform(-20, 20))
            margins = ramp_margins(samples, Direction.DOWN, threshold)
            r0 = float(rng.uniform(0.0, 0.3))
            r1 = r0 + float(rng.uniform(0.0, 0.05))
            a = solve_worst_case(margins, r0, 1.0)
            b = solve_worst_case(margins, r1, 1.0)
            if a.gamma_star == b.gamma_star and 0.0 < a.inner_value < 1.0:
                hits += 1
                assert a.inner_value - b.inner_value == pytest.approx(
                    a.gamma_star * (r1 - r0), abs=1e-12
                )
        assert hits > 50  # the linear regime must actually be exercised


class TestSweep:
    def test_two_point_no_ramps(self):
        samples = SampleSet.from_tuples([(0.0, 0.0)] * 4)
        curve = sweep(
            samples, Direction.DOWN, [50.0, 60.0], WassersteinConfig(p=1.0, radius=0.0)
        )
        assert curve.ramp_probabilities.tolist() == [0.0, 0.0]
        assert curve.density.tolist() == [0.0, 0.0]

    def test_zero_radius_matches_erp_curve(self):
        curve = sweep(
            WORKED_PAIRS, Direction.DOWN, [1.0, 4.0], WassersteinConfig(p=1.0, radius=0.0)
        )
        assert curve.ramp_probabilities == pytest.approx([1.0 / 3.0, 0.0], abs=1e-12)
        assert curve.density == pytest.approx([1.0 / 9.0, 1.0 / 9.0], abs=1e-12)

    def test_rejects_bad_grid(self):
        cfg = WassersteinConfig(p=1.0, radius=0.0)
        with pytest.raises(InvalidArgumentError):
            sweep(WORKED_PAIRS, Direction.DOWN, [1.0], cfg)
        with pytest.raises(InvalidArgumentError):
            sweep(WORKED_PAIRS, Direction.DOWN, [2.0, 1.0], cfg)

    def test_monotone_nonincreasing(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            samples = random_sample_set(rng)
            grid = np.sort(rng.uniform(-25, 25, size=6))
            if np.any(np.diff(grid) <= 0):
                continue
            curve = sweep(
                samples,
                Direction.DOWN,
                grid,
                WassersteinConfig(p=1.0, radius=float(rng.uniform(0, 0.5))),
            )
            assert np.all(np.diff(curve.ramp_probabilities) <= 1e-12)

    def test_lengths_and_density_definition(self):
        cfg = WassersteinConfig(p=1.0, radius=0.05)
        grid = [0.0, 2.0, 5.0]
        curve = sweep(WORKED_PAIRS, Direction.DOWN, grid, cfg)
        assert len(curve) == 3
        p = curve.ramp_probabilities
        assert curve.density[0] == pytest.approx((p[0] - p[1]) / 2.0)
        assert curve.density[1] == pytest.approx((p[1] - p[2]) / 3.0)
        assert curve.density[2] == curve.density[1]
