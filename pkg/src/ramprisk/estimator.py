"""Worst-case ramp probability estimation over a Wasserstein ambiguity set.

The worst-case probability of a ramp event is computed through the convex
dual of the distributionally robust problem.  After eliminating the
per-sample variables the dual collapses to a one-dimensional concave
piecewise-linear maximization in the multiplier ``gamma``, solved exactly
by a breakpoint scan (:func:`solve_worst_case`).  The explicit LP is kept
alongside as an independent oracle (see :mod:`ramprisk.lp`).

All operations here are pure functions of their inputs.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np

from .domain import (
    Direction,
    EmptySampleError,
    EstimateResult,
    InvalidArgumentError,
    RampQuery,
    SampleSet,
    Solver,
    WassersteinConfig,
)

# Tolerance for identities that hold exactly in real arithmetic but pick up
# rounding noise in floating point (radius->0 limit, sweep monotonicity).
ARITHMETIC_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MarginVector:
    """Per-sample non-ramp margins at a fixed threshold.

    Entry ``i`` is ``threshold - directed_ramp_i`` (MW): positive when
    sample ``i`` is a non-ramp at that threshold, non-positive when it
    ramps.  Order matches the originating sample set.
    """

    margins: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.margins, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise EmptySampleError("margin vector must be one-dimensional and non-empty")
        if not np.all(np.isfinite(arr)):
            raise InvalidArgumentError("margins must all be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "margins", arr)

    @property
    def count(self) -> int:
        return int(self.margins.size)

    def __len__(self) -> int:
        return self.count

    def __iter__(self) -> Iterator[float]:
        return iter(self.margins.tolist())

    def __array__(self, dtype=None) -> np.ndarray:
        return np.asarray(self.margins, dtype=dtype)


class WorstCaseSolution(NamedTuple):
    """Optimum of the concave dual reduction: value, multiplier, scan stop."""

    inner_value: float
    gamma_star: float
    active_breakpoint: Optional[int]


def directed_ramps(samples: SampleSet, direction: Direction) -> np.ndarray:
    """Historical ramp magnitudes oriented by direction: ``dw1 - dw2`` for
    down events, ``dw2 - dw1`` for up events."""
    if len(samples) == 0:
        raise EmptySampleError("sample set is empty")
    dw1 = np.fromiter((p.dw1 for p in samples), dtype=float, count=len(samples))
    dw2 = np.fromiter((p.dw2 for p in samples), dtype=float, count=len(samples))
    if direction is Direction.DOWN:
        return dw1 - dw2
    return dw2 - dw1


def ramp_margins(
    samples: SampleSet, direction: Direction, threshold: float
) -> MarginVector:
    """Margins ``threshold - directed_ramp`` per sample, order preserved."""
    if not math.isfinite(threshold):
        raise InvalidArgumentError(f"threshold must be finite, got {threshold!r}")
    return MarginVector(float(threshold) - directed_ramps(samples, direction))


def dual_norm_scale(p: float) -> float:
    """Dual-norm constant coupling the metric order to the multiplier cap.

    The dual constraint bounds each per-sample slope by ``gamma`` through
    the q-norm of the fixed direction vector ``(1, -1)``, i.e. ``2**(1/q)``
    with ``1/p + 1/q = 1``.  Returns 1 for ``p=1``, ``sqrt(2)`` for
    ``p=2``, 2 for ``p=inf``.
    """
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise InvalidArgumentError(f"metric order p must be >= 1, got {p!r}")
    if math.isinf(p):
        return 2.0
    return 2.0 ** ((p - 1.0) / p)


def radius_from_confidence(alpha: float, sample_count: int) -> float:
    """Ambiguity radius for a target confidence level and sample count.

    ``alpha`` is the confidence level (e.g. 0.9, 0.99, 0.999): the chance
    that the ambiguity set captures the true distribution.  The radius
    shrinks as ``1/sample_count``, so more history buys a tighter set at
    the same confidence.  Natural logarithm.
    """
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise InvalidArgumentError(f"alpha must lie in (0, 1), got {alpha!r}")
    count = int(sample_count)
    if count != sample_count or count < 1:
        raise InvalidArgumentError(
            f"sample_count must be a positive integer, got {sample_count!r}"
        )
    return -math.log1p(-alpha) / count


def worst_case_objective(
    margins, radius: float, scale: float, gamma: float
) -> float:
    """Evaluate the concave dual objective at a given multiplier ``gamma``.

    ``(1/I) * sum_i min(1, gamma * g_i / scale) - gamma * radius`` over the
    samples with positive margin ``g_i``.  Exposed for audit: the closed
    form solver maximizes exactly this function.
    """
    g = np.asarray(margins, dtype=float)
    pos = g[g > 0.0]
    acc = float(np.minimum(1.0, gamma * pos / scale).sum()) / g.size
    return acc - gamma * radius


def solve_worst_case(margins, radius: float, scale: float) -> WorstCaseSolution:
    """Maximize the dual objective over ``gamma >= 0`` by breakpoint scan.

    Parameters
    ----------
    margins : MarginVector or array-like
        Non-ramp margins ``g_i``; entries ``<= 0`` contribute nothing.
    radius : float
        Ambiguity radius, ``>= 0``.
    scale : float
        Dual-norm constant from :func:`dual_norm_scale`, ``> 0``.

    Returns
    -------
    WorstCaseSolution
        ``inner_value`` is the optimum clamped to [0, 1]; ``gamma_star``
        the smallest maximizing multiplier; ``active_breakpoint`` the
        0-based index into the descending-sorted positive margins at which
        the scan stopped (``None`` when ``gamma_star == 0``).

    Notes
    -----
    The objective is piecewise linear and concave with breakpoints at
    ``gamma = scale / g_i``.  Scanning positive margins in descending
    order, the slope after ``k`` saturations is
    ``sum(remaining margins) / (I * scale) - radius``; the first
    non-positive slope stops the scan.  Ties on a flat segment resolve to
    the left endpoint, i.e. the least aggressive dual certificate.
    """
    g = np.asarray(margins, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise EmptySampleError("margins must be one-dimensional and non-empty")
    radius = float(radius)
    if not math.isfinite(radius) or radius < 0.0:
        raise InvalidArgumentError(f"radius must be finite and >= 0, got {radius!r}")
    scale = float(scale)
    if not math.isfinite(scale) or scale <= 0.0:
        raise InvalidArgumentError(f"scale must be finite and > 0, got {scale!r}")

    pos = g[g > 0.0]
    if pos.size == 0:
        return WorstCaseSolution(0.0, 0.0, None)

    count = g.size
    order = -np.sort(-pos)
    # suffix[k] = sum of margins not yet saturated after k buys; the final 0
    # entry makes the post-saturation slope -radius, always a valid stop.
    suffix = np.concatenate([np.cumsum(order[::-1])[::-1], [0.0]])
    slopes = suffix / (count * scale) - radius
    stop = int(np.argmax(slopes <= 0.0))
    if stop == 0:
        return WorstCaseSolution(0.0, 0.0, None)

    stop_margin = float(order[stop - 1])
    gamma = scale / stop_margin
    # Evaluate at the stopping breakpoint in ratio form: saturated terms hit
    # 1.0 exactly even when gamma itself exceeds float range (the reported
    # multiplier is capped); ratio overflow saturates to 1.0 by design.
    with np.errstate(over="ignore"):
        value = float(np.minimum(1.0, pos / stop_margin).sum()) / count
    value -= scale * (radius / stop_margin)
    value = min(1.0, max(0.0, value))
    if math.isinf(gamma):
        gamma = sys.float_info.max
    return WorstCaseSolution(value, gamma, stop - 1)


def erp(samples: SampleSet, query: RampQuery) -> float:
    """Empirical ramp probability: fraction of samples at or past the threshold.

    Boundary convention: a directed ramp exactly equal to the threshold
    counts as a ramp.
    """
    ramps = directed_ramps(samples, query.direction)
    return float(np.count_nonzero(ramps >= query.threshold)) / len(samples)


def estimate(
    samples: SampleSet,
    query: RampQuery,
    config: WassersteinConfig,
    solver: Solver = Solver.CLOSED_FORM,
) -> EstimateResult:
    """Worst-case ramp probability over the ambiguity set.

    Computes the infimum, over all distributions within ``config.radius``
    of the empirical one, of the no-ramp probability, and reports its
    complement: the supremum of the ramp probability.  At ``radius=0``
    this equals :func:`erp` exactly.  ``solver`` selects the closed-form
    breakpoint scan (default) or the explicit LP oracle.
    """
    margins = ramp_margins(samples, query.direction, query.threshold)
    scale = dual_norm_scale(config.p)
    radius = config.radius

    if solver is Solver.CLOSED_FORM:
        value, gamma, breakpoint_index = solve_worst_case(margins, radius, scale)
    else:
        from . import lp  # deferred: lp is optional at import time for the hot path

        solution = lp.solve(lp.build_dual_lp(margins, radius, scale))
        if solution.status is not lp.Status.OPTIMAL:
            raise lp.SolverFailureError(
                f"dual LP unexpectedly {solution.status.value}"
            )
        value = min(1.0, max(0.0, float(solution.objective_value)))
        gamma = max(0.0, float(solution.variable_values[margins.count]))
        breakpoint_index = None

    return EstimateResult(
        inner_value=value,
        gamma_star=gamma,
        radius_used=radius,
        solver=solver,
        active_breakpoint=breakpoint_index,
    )


@dataclass(frozen=True, eq=False)
class SweepCurve:
    """Worst-case ramp probability over a threshold grid, with quasi-density.

    The curve is an envelope: each threshold may be certified by a
    different worst-case distribution, so the values do not form one
    distribution's CDF.  ``density`` holds forward finite differences
    ``(P[k] - P[k+1]) / (t[k+1] - t[k])`` (1/MW), last entry repeated.
    """

    thresholds: np.ndarray
    ramp_probabilities: np.ndarray
    density: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.thresholds, dtype=float)
        p = np.asarray(self.ramp_probabilities, dtype=float)
        d = np.asarray(self.density, dtype=float)
        if not (t.size == p.size == d.size):
            raise InvalidArgumentError("sweep curve arrays must have equal length")
        if t.size < 2 or np.any(np.diff(t) <= 0.0):
            raise InvalidArgumentError("thresholds must be strictly increasing, >= 2 points")
        if np.any(np.diff(p) > ARITHMETIC_TOL):
            raise InvalidArgumentError("ramp probabilities must be nonincreasing in threshold")
        for name, arr in (("thresholds", t), ("ramp_probabilities", p), ("density", d)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return int(self.thresholds.size)


def sweep(
    samples: SampleSet,
    direction: Direction,
    thresholds: Sequence[float],
    config: WassersteinConfig,
    solver: Solver = Solver.CLOSED_FORM,
) -> SweepCurve:
    """Run :func:`estimate` over an ascending threshold grid."""
    grid = np.asarray(thresholds, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise InvalidArgumentError("threshold grid needs at least 2 points")
    if not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0.0):
        raise InvalidArgumentError("threshold grid must be finite and strictly ascending")

    probs = np.array(
        [
            estimate(samples, RampQuery(direction, t), config, solver).ramp_probability
            for t in grid.tolist()
        ]
    )
    density = np.empty_like(probs)
    density[:-1] = (probs[:-1] - probs[1:]) / np.diff(grid)
    density[-1] = density[-2]
    return SweepCurve(grid, probs, density)
