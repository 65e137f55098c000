"""Deterministic synthetic wind data for demos, tests and golden files.

Everything here is seeded and reproducible: the same seed yields the same
series byte-for-byte through :func:`write_series`.  The generators mimic
the shape of aggregated plant output around a forecast band: a mean-pulled
forecast walk plus autocorrelated forecast errors, with occasional missing
periods to exercise cadence-gap handling.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import List, Union

import numpy as np

from .data import SERIES_HEADER, TimeSeriesRecord
from .domain import ErrorPair, SampleSet

EPOCH_START_S = 1_100_000_000  # arbitrary fixed origin


def generate_series(
    count: int = 600,
    seed: int = 7,
    base_mw: float = 1065.0,
    cadence_s: int = 600,
    gap_rate: float = 0.02,
) -> List[TimeSeriesRecord]:
    """A seeded series of point forecasts and observed outputs (MW).

    Forecasts follow a mean-pulled random walk around ``base_mw``; errors
    are AR(1) so consecutive periods are correlated like real ramps.  With
    probability ``gap_rate`` a period is dropped, leaving a cadence gap.
    """
    rng = np.random.default_rng(seed)
    records: List[TimeSeriesRecord] = []
    stamp = EPOCH_START_S
    forecast = base_mw
    error = 0.0
    for _ in range(count):
        forecast = base_mw + 0.9 * (forecast - base_mw) + rng.normal(0.0, 4.0)
        error = 0.5 * error + rng.normal(0.0, 12.0)
        forecast_mw = max(0.0, forecast)
        observed_mw = max(0.0, forecast_mw + error)
        records.append(TimeSeriesRecord(stamp, forecast_mw, observed_mw))
        stamp += cadence_s
        if rng.random() < gap_rate:
            stamp += cadence_s  # dropped period
    return records


def generate_error_pairs(
    count: int,
    seed: int,
    sigma_mw: float = 15.0,
    correlation: float = 0.5,
) -> SampleSet:
    """Seeded correlated error pairs, bypassing series extraction.

    Mixes two standard normal streams explicitly (no covariance
    factorization) so the output is stable across platforms.
    """
    rng = np.random.default_rng(seed)
    z1 = rng.standard_normal(count)
    z2 = rng.standard_normal(count)
    dw1 = sigma_mw * z1
    dw2 = sigma_mw * (correlation * z1 + np.sqrt(1.0 - correlation**2) * z2)
    return SampleSet(
        tuple(ErrorPair(a, b) for a, b in zip(dw1.tolist(), dw2.tolist())),
        provenance=f"synthetic pairs, seed {seed}",
    )


def write_series(records: List[TimeSeriesRecord], path: Union[str, Path]) -> None:
    """Write records as a loadable series CSV (integer epoch timestamps)."""
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SERIES_HEADER)
        for record in records:
            writer.writerow(
                [str(int(record.timestamp)), repr(record.forecast), repr(record.observed)]
            )
