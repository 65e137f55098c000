"""Core type construction, validation and the threshold conversion."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from ramprisk import (
    ConfidenceRule,
    Direction,
    ErrorPair,
    EstimateResult,
    InvalidArgumentError,
    RampQuery,
    SampleSet,
    Solver,
    WassersteinConfig,
    threshold_to_error_space,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


class TestErrorPair:
    def test_fields(self):
        pair = ErrorPair(5, -6)
        assert pair.dw1 == 5.0 and pair.dw2 == -6.0

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(InvalidArgumentError):
            ErrorPair(bad, 0.0)
        with pytest.raises(InvalidArgumentError):
            ErrorPair(0.0, bad)

    def test_immutable(self):
        pair = ErrorPair(1.0, 2.0)
        with pytest.raises(AttributeError):
            pair.dw1 = 3.0


class TestSampleSet:
    def test_preserves_order(self):
        pairs = [(3.0, 1.0), (-2.0, 0.5), (0.0, 0.0)]
        samples = SampleSet.from_tuples(pairs)
        assert [(p.dw1, p.dw2) for p in samples] == pairs
        assert len(samples) == 3

    def test_empty_construction_allowed(self):
        assert len(SampleSet(())) == 0

    def test_provenance(self):
        samples = SampleSet((ErrorPair(1, 2),), provenance="unit test")
        assert samples.provenance == "unit test"


class TestWassersteinConfig:
    @pytest.mark.parametrize(
        "p,q", [(1.0, math.inf), (2.0, 2.0), (math.inf, 1.0), (4.0, 4.0 / 3.0)]
    )
    def test_dual_exponent(self, p, q):
        assert WassersteinConfig(p=p, radius=0.0).q == pytest.approx(q)

    def test_rejects_bad_order(self):
        with pytest.raises(InvalidArgumentError):
            WassersteinConfig(p=0.5, radius=0.0)
        with pytest.raises(InvalidArgumentError):
            WassersteinConfig(p=math.nan, radius=0.0)

    def test_rejects_negative_radius(self):
        with pytest.raises(InvalidArgumentError):
            WassersteinConfig(p=1.0, radius=-0.01)

    def test_explicit_source(self):
        cfg = WassersteinConfig(p=1.0, radius=0.2)
        assert cfg.radius_source == "explicit" and cfg.confidence is None

    def test_from_confidence(self):
        cfg = WassersteinConfig.from_confidence(0.9, 200)
        assert cfg.radius_source == "from_confidence"
        assert cfg.confidence == ConfidenceRule(0.9, 200)
        assert cfg.radius == pytest.approx(0.01151292546497023, abs=1e-15)


class TestRampQuery:
    def test_error_space(self):
        query = RampQuery.in_error_space(Direction.DOWN, 12.5)
        assert query.threshold == 12.5 and query.power_space_origin is None

    def test_power_space_records_origin(self):
        query = RampQuery.in_power_space(Direction.UP, 200.0, 1062.0, 1068.0)
        assert query.threshold == 194.0
        assert query.power_space_origin == (200.0, 1062.0, 1068.0)

    def test_rejects_non_finite_threshold(self):
        with pytest.raises(InvalidArgumentError):
            RampQuery(Direction.DOWN, math.inf)


class TestEstimateResult:
    def test_complement_exact(self):
        result = EstimateResult(
            inner_value=0.5666666666666667, gamma_star=1.0, radius_used=0.1
        )
        assert result.ramp_probability == 1.0 - result.inner_value

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            EstimateResult(inner_value=1.5, gamma_star=0.0, radius_used=0.0)
        with pytest.raises(InvalidArgumentError):
            EstimateResult(inner_value=0.5, gamma_star=-1.0, radius_used=0.0)

    def test_solver_tag(self):
        result = EstimateResult(
            inner_value=0.0, gamma_star=0.0, radius_used=0.0, solver=Solver.LP_ORACLE
        )
        assert result.solver is Solver.LP_ORACLE


class TestThresholdConversion:
    def test_band_centered_forecasts(self):
        # both point forecasts at the same level: error threshold == power threshold
        assert threshold_to_error_space(300.0, 1065.0, 1065.0, Direction.DOWN) == 300.0

    def test_identity_case(self):
        assert threshold_to_error_space(0.0, 0.0, 0.0, Direction.DOWN) == 0.0

    def test_up_direction(self):
        assert threshold_to_error_space(200.0, 1062.0, 1068.0, Direction.UP) == 194.0

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidArgumentError):
            threshold_to_error_space(math.nan, 0.0, 0.0, Direction.DOWN)

    @settings(max_examples=200, deadline=None, derandomize=True)
    @given(finite, finite, finite)
    def test_down_up_swap_symmetry(self, ramp_threshold, a, b):
        down = threshold_to_error_space(ramp_threshold, a, b, Direction.DOWN)
        up = threshold_to_error_space(ramp_threshold, b, a, Direction.UP)
        assert down == up  # bit-exact by construction


def test_direction_parse():
    assert Direction.parse(" Down ") is Direction.DOWN
    assert Direction.parse("UP") is Direction.UP
    with pytest.raises(InvalidArgumentError):
        Direction.parse("sideways")
