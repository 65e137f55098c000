"""Core data types for worst-case ramp probability estimation.

Sign convention used throughout the package: a forecast error is
``observed - point forecast`` (MW).  With this convention a drop in actual
output between two periods shows up as ``dw1 - dw2`` exceeding the
down-ramp threshold expressed in error space.

All types are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition (non-finite, out of range)."""


class EmptySampleError(ValueError):
    """An operation that needs at least one sample received none."""


class Direction(enum.Enum):
    """Orientation of a ramp event: falling output (down) or rising output (up)."""

    DOWN = "down"
    UP = "up"

    @classmethod
    def parse(cls, text: str) -> "Direction":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise InvalidArgumentError(
                f"direction must be 'down' or 'up', got {text!r}"
            ) from None


class Solver(enum.Enum):
    """Which solution path produced an estimate."""

    CLOSED_FORM = "closed_form"
    LP_ORACLE = "lp_oracle"


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidArgumentError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ErrorPair:
    """One historical joint forecast-error observation for two consecutive periods.

    ``dw1``/``dw2`` are observed minus point forecast (MW) in period 1/2.
    """

    dw1: float
    dw2: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "dw1", _require_finite("dw1", self.dw1))
        object.__setattr__(self, "dw2", _require_finite("dw2", self.dw2))


@dataclass(frozen=True)
class SampleSet:
    """An ordered collection of :class:`ErrorPair`.

    The collection is the support of the empirical distribution: each pair
    carries probability mass ``1/I``.  Ingestion order is preserved exactly;
    prefix-based sample-size protocols rely on it.  Construction allows an
    empty set (extraction may legitimately find no pairs); estimation
    operations reject it.
    """

    pairs: Tuple[ErrorPair, ...]
    provenance: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[ErrorPair]:
        return iter(self.pairs)

    @classmethod
    def from_tuples(
        cls, pairs, provenance: Optional[str] = None
    ) -> "SampleSet":
        """Build from an iterable of ``(dw1, dw2)`` tuples."""
        return cls(tuple(ErrorPair(a, b) for a, b in pairs), provenance)


@dataclass(frozen=True)
class ConfidenceRule:
    """Radius provenance: confidence level and sample count it was derived from."""

    alpha: float
    sample_count: int


@dataclass(frozen=True)
class WassersteinConfig:
    """Ambiguity-set configuration: metric order ``p`` and radius ``r``.

    ``p`` is the order of the transport metric (``p >= 1``, ``math.inf``
    allowed).  The dual exponent ``q`` with ``1/p + 1/q = 1`` is derived
    (conventions: ``p=1 <-> q=inf``, ``p=inf <-> q=1``).  ``radius`` is the
    robustness budget; ``radius=0`` collapses the ambiguity set onto the
    empirical distribution.  ``confidence`` records the (alpha, sample
    count) a derived radius came from, or ``None`` for an explicit radius.
    """

    p: float = 1.0
    radius: float = 0.0
    confidence: Optional[ConfidenceRule] = None

    def __post_init__(self) -> None:
        p = float(self.p)
        if math.isnan(p) or p < 1.0:
            raise InvalidArgumentError(f"metric order p must be >= 1, got {self.p!r}")
        object.__setattr__(self, "p", p)
        radius = float(self.radius)
        if not math.isfinite(radius) or radius < 0.0:
            raise InvalidArgumentError(
                f"radius must be finite and >= 0, got {self.radius!r}"
            )
        object.__setattr__(self, "radius", radius)

    @property
    def q(self) -> float:
        """Dual exponent: ``1/p + 1/q = 1``."""
        if self.p == 1.0:
            return math.inf
        if math.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1.0)

    @property
    def radius_source(self) -> str:
        return "explicit" if self.confidence is None else "from_confidence"

    @classmethod
    def from_confidence(
        cls, alpha: float, sample_count: int, p: float = 1.0
    ) -> "WassersteinConfig":
        """Derive the radius from a confidence level and sample count."""
        from .estimator import radius_from_confidence  # deferred: avoids cycle

        radius = radius_from_confidence(alpha, sample_count)
        return cls(p=p, radius=radius, confidence=ConfidenceRule(alpha, sample_count))


@dataclass(frozen=True)
class RampQuery:
    """A ramp event question: direction plus threshold in error space (MW).

    ``power_space_origin`` optionally records the power-space threshold and
    point forecasts the error-space threshold was derived from.
    """

    direction: Direction
    threshold: float
    power_space_origin: Optional[Tuple[float, float, float]] = None

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "threshold", _require_finite("threshold", self.threshold)
        )

    @classmethod
    def in_error_space(cls, direction: Direction, threshold: float) -> "RampQuery":
        return cls(direction, threshold)

    @classmethod
    def in_power_space(
        cls, direction: Direction, ramp_threshold: float, w1e: float, w2e: float
    ) -> "RampQuery":
        """Build a query from a power-space threshold and the two point forecasts."""
        t = threshold_to_error_space(ramp_threshold, w1e, w2e, direction)
        return cls(direction, t, power_space_origin=(float(ramp_threshold), float(w1e), float(w2e)))


@dataclass(frozen=True)
class EstimateResult:
    """Worst-case ramp probability and the solve diagnostics behind it.

    ``inner_value`` is the worst-case (infimum) probability of the no-ramp
    half-plane; ``ramp_probability`` is its complement, exactly
    ``1 - inner_value`` by construction.  ``gamma_star`` is the optimal
    dual multiplier pricing the ambiguity radius; ``active_breakpoint`` is
    the index (into the descending-sorted positive margins) of the last
    breakpoint bought by the closed-form scan, ``None`` when ``gamma_star``
    is 0 or the LP path was used.
    """

    inner_value: float
    gamma_star: float
    radius_used: float
    solver: Solver = Solver.CLOSED_FORM
    active_breakpoint: Optional[int] = None

    def __post_init__(self) -> None:
        v = _require_finite("inner_value", self.inner_value)
        if not 0.0 <= v <= 1.0:
            raise InvalidArgumentError(f"inner_value must lie in [0, 1], got {v!r}")
        g = _require_finite("gamma_star", self.gamma_star)
        if g < 0.0:
            raise InvalidArgumentError(f"gamma_star must be >= 0, got {g!r}")
        r = _require_finite("radius_used", self.radius_used)
        if r < 0.0:
            raise InvalidArgumentError(f"radius_used must be >= 0, got {r!r}")

    @property
    def ramp_probability(self) -> float:
        return 1.0 - self.inner_value


def threshold_to_error_space(
    ramp_threshold: float, w1e: float, w2e: float, direction: Direction
) -> float:
    """Convert a power-space ramp threshold (MW) into error space.

    For a down-ramp the event ``w1 - w2 >= R`` on actual outputs is, with the
    ``observed - forecast`` error convention, ``dw1 - dw2 >= R - w1e + w2e``;
    the up-ramp formula swaps the two point forecasts.
    """
    ramp_threshold = _require_finite("ramp_threshold", ramp_threshold)
    w1e = _require_finite("w1e", w1e)
    w2e = _require_finite("w2e", w2e)
    if direction is Direction.DOWN:
        return ramp_threshold - w1e + w2e
    return ramp_threshold - w2e + w1e
