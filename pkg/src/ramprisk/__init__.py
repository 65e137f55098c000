"""Worst-case wind ramp probability estimation from historical forecast errors.

Given pairs of forecast errors for consecutive periods, the package bounds
the probability of a ramp event over every distribution within a chosen
transport distance of the empirical one -- no parametric wind-power PDF is
fitted.  The bound comes from an exact closed-form solve of the convex
dual; a small built-in LP solver provides an independent cross-check.
"""

from . import lp, synthetic
from .data import (
    PairExtractionSpec,
    PairScan,
    SeriesFormatError,
    SeriesParseError,
    TimeSeriesRecord,
    extract_pairs,
    load_series,
    prefix_split,
    read_pairs,
    scan_pairs,
    write_pairs,
)
from .domain import (
    ConfidenceRule,
    Direction,
    EmptySampleError,
    ErrorPair,
    EstimateResult,
    InvalidArgumentError,
    RampQuery,
    SampleSet,
    Solver,
    WassersteinConfig,
    threshold_to_error_space,
)
from .estimator import (
    MarginVector,
    SweepCurve,
    WorstCaseSolution,
    directed_ramps,
    dual_norm_scale,
    erp,
    estimate,
    radius_from_confidence,
    ramp_margins,
    solve_worst_case,
    sweep,
    worst_case_objective,
)

__version__ = "0.1.0"

__all__ = [
    "ConfidenceRule",
    "Direction",
    "EmptySampleError",
    "ErrorPair",
    "EstimateResult",
    "InvalidArgumentError",
    "MarginVector",
    "PairExtractionSpec",
    "PairScan",
    "RampQuery",
    "SampleSet",
    "SeriesFormatError",
    "SeriesParseError",
    "Solver",
    "SweepCurve",
    "TimeSeriesRecord",
    "WassersteinConfig",
    "WorstCaseSolution",
    "directed_ramps",
    "dual_norm_scale",
    "erp",
    "estimate",
    "extract_pairs",
    "load_series",
    "lp",
    "prefix_split",
    "radius_from_confidence",
    "ramp_margins",
    "read_pairs",
    "scan_pairs",
    "solve_worst_case",
    "sweep",
    "synthetic",
    "threshold_to_error_space",
    "worst_case_objective",
    "write_pairs",
]
