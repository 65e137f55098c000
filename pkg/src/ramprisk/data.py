"""Wind time-series ingestion and forecast-error pair extraction.

Input files are plain CSV with header ``timestamp,forecast_mw,observed_mw``
(timestamps ISO-8601 or integer epoch seconds, strictly increasing).
Forecast errors are computed as ``observed - forecast`` (MW), matching the
sign convention of :mod:`ramprisk.domain`.  Extracted pair files use the
header ``dw1_mw,dw2_mw`` with shortest round-trip float formatting.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .domain import ErrorPair, InvalidArgumentError, SampleSet

SERIES_HEADER = ("timestamp", "forecast_mw", "observed_mw")
PAIRS_HEADER = ("dw1_mw", "dw2_mw")

# Tolerance when matching timestamp spacing against the expected cadence (s).
CADENCE_TOL_S = 1e-6

WINDOW_MODE_BOTH = "both"
WINDOW_MODE_FIRST = "first"


class SeriesParseError(ValueError):
    """A row of an input file could not be parsed; message names the line."""


class SeriesFormatError(ValueError):
    """The file parses but violates format rules (header, ordering, duplicates)."""


@dataclass(frozen=True)
class TimeSeriesRecord:
    """One period of a wind series: epoch-second timestamp, point forecast
    and observed output (both MW, finite and nonnegative)."""

    timestamp: float
    forecast: float
    observed: float

    def __post_init__(self) -> None:
        for name in ("timestamp", "forecast", "observed"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidArgumentError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.forecast < 0.0 or self.observed < 0.0:
            raise InvalidArgumentError("forecast and observed must be >= 0 MW")

    @property
    def error(self) -> float:
        """Forecast error, observed minus forecast (MW)."""
        return self.observed - self.forecast


@dataclass(frozen=True)
class PairExtractionSpec:
    """How neighbor pairs are selected from a series.

    ``window_lo``/``window_hi`` bound the point forecast (MW); by default
    both periods of a pair must fall inside the window (``window_mode
    'both'``), ``'first'`` restricts only the leading period.  When
    ``require_consecutive`` is set, neighbor records whose spacing differs
    from ``cadence`` (seconds; inferred as the modal spacing when omitted)
    are skipped rather than paired across the gap.
    """

    window_lo: float = -math.inf
    window_hi: float = math.inf
    require_consecutive: bool = True
    cadence: Optional[float] = None
    window_mode: str = WINDOW_MODE_BOTH

    def __post_init__(self) -> None:
        if math.isnan(self.window_lo) or math.isnan(self.window_hi):
            raise InvalidArgumentError("window bounds must not be NaN")
        if self.window_lo > self.window_hi:
            raise InvalidArgumentError(
                f"window_lo {self.window_lo} exceeds window_hi {self.window_hi}"
            )
        if self.window_mode not in (WINDOW_MODE_BOTH, WINDOW_MODE_FIRST):
            raise InvalidArgumentError(
                f"window_mode must be 'both' or 'first', got {self.window_mode!r}"
            )
        if self.cadence is not None and (
            not math.isfinite(self.cadence) or self.cadence <= 0.0
        ):
            raise InvalidArgumentError("cadence must be a positive duration in seconds")


@dataclass(frozen=True)
class PairScan:
    """Extraction outcome plus diagnostics for reporting."""

    samples: SampleSet
    eligible: int  # neighbor pairs whose forecasts fit the window
    skipped_gaps: int  # eligible pairs dropped for violating the cadence


def parse_timestamp(text: str) -> float:
    """Parse an ISO-8601 timestamp or integer epoch seconds into epoch seconds.

    Naive ISO timestamps are taken as UTC; a trailing ``Z`` is accepted.
    """
    text = text.strip()
    try:
        return float(int(text))
    except ValueError:
        pass
    iso = text[:-1] + "+00:00" if text.endswith(("Z", "z")) else text
    try:
        stamp = datetime.fromisoformat(iso)
    except ValueError:
        raise ValueError(f"not an ISO-8601 timestamp or epoch seconds: {text!r}") from None
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.timestamp()


def load_series(path: Union[str, Path]) -> List[TimeSeriesRecord]:
    """Read a ``timestamp,forecast_mw,observed_mw`` CSV into records.

    Raises :class:`SeriesParseError` (with the 1-based line number) on a
    malformed row, :class:`SeriesFormatError` on a bad header or on
    unordered/duplicate timestamps.
    """
    path = Path(path)
    records: List[TimeSeriesRecord] = []
    with path.open("r", encoding="utf-8-sig", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SeriesFormatError(f"{path}: empty file") from None
        if tuple(h.strip() for h in header) != SERIES_HEADER:
            raise SeriesFormatError(
                f"{path}: expected header {','.join(SERIES_HEADER)!r}, got {','.join(header)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise SeriesParseError(f"{path}: line {lineno}: expected 3 fields, got {len(row)}")
            try:
                record = TimeSeriesRecord(
                    parse_timestamp(row[0]), float(row[1]), float(row[2])
                )
            except (ValueError, InvalidArgumentError) as exc:
                raise SeriesParseError(f"{path}: line {lineno}: {exc}") from None
            records.append(record)
    stamps = [r.timestamp for r in records]
    for i in range(1, len(stamps)):
        if stamps[i] == stamps[i - 1]:
            raise SeriesFormatError(f"{path}: duplicate timestamp at record {i + 1}")
        if stamps[i] < stamps[i - 1]:
            raise SeriesFormatError(f"{path}: timestamps not increasing at record {i + 1}")
    return records


def _infer_cadence(series: Sequence[TimeSeriesRecord]) -> float:
    diffs = Counter(
        series[i + 1].timestamp - series[i].timestamp for i in range(len(series) - 1)
    )
    # modal spacing; ties resolved toward the smallest spacing
    top = max(diffs.items(), key=lambda kv: (kv[1], -kv[0]))
    return top[0]


def scan_pairs(
    series: Sequence[TimeSeriesRecord], spec: PairExtractionSpec
) -> PairScan:
    """Extract neighbor forecast-error pairs plus skip diagnostics.

    Pairs overlap: a record may close one pair and open the next.  A series
    with fewer than two records yields an empty scan.
    """
    if len(series) < 2:
        return PairScan(SampleSet((), provenance="no neighbor periods"), 0, 0)
    cadence = spec.cadence
    if cadence is None and spec.require_consecutive:
        cadence = _infer_cadence(series)

    def in_window(forecast: float) -> bool:
        return spec.window_lo <= forecast <= spec.window_hi

    pairs: List[ErrorPair] = []
    eligible = 0
    skipped = 0
    for first, second in zip(series, series[1:]):
        if not in_window(first.forecast):
            continue
        if spec.window_mode == WINDOW_MODE_BOTH and not in_window(second.forecast):
            continue
        eligible += 1
        if spec.require_consecutive and abs(
            (second.timestamp - first.timestamp) - cadence
        ) > CADENCE_TOL_S:
            skipped += 1
            continue
        pairs.append(ErrorPair(first.error, second.error))

    provenance = (
        f"{len(pairs)} pairs, forecast window [{spec.window_lo}, {spec.window_hi}] MW,"
        f" mode {spec.window_mode}"
    )
    return PairScan(SampleSet(tuple(pairs), provenance=provenance), eligible, skipped)


def extract_pairs(
    series: Sequence[TimeSeriesRecord], spec: PairExtractionSpec
) -> SampleSet:
    """Neighbor forecast-error pairs per the extraction spec, order preserved."""
    return scan_pairs(series, spec).samples


def prefix_split(samples: SampleSet, count: int) -> Tuple[SampleSet, SampleSet]:
    """First ``count`` pairs as the training set, everything as the full set.

    The training prefix drives the estimate and its empirical baseline; the
    untouched full set is the ground-truth proxy.
    """
    count = int(count)
    if not 1 <= count <= len(samples):
        raise InvalidArgumentError(
            f"prefix count must lie in [1, {len(samples)}], got {count}"
        )
    training = SampleSet(
        samples.pairs[:count],
        provenance=f"first {count} of {len(samples)} pairs",
    )
    return training, samples


def write_pairs(samples: SampleSet, path: Union[str, Path]) -> None:
    """Write a sample set as ``dw1_mw,dw2_mw`` CSV, shortest round-trip floats."""
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        write_pairs_to(samples, handle)


def write_pairs_to(samples: SampleSet, handle) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(PAIRS_HEADER)
    for pair in samples:
        writer.writerow([repr(pair.dw1), repr(pair.dw2)])


def read_pairs(path: Union[str, Path]) -> SampleSet:
    """Read a ``dw1_mw,dw2_mw`` CSV back into a sample set."""
    path = Path(path)
    pairs: List[ErrorPair] = []
    with path.open("r", encoding="utf-8-sig", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SeriesFormatError(f"{path}: empty file") from None
        if tuple(h.strip() for h in header) != PAIRS_HEADER:
            raise SeriesFormatError(
                f"{path}: expected header {','.join(PAIRS_HEADER)!r}, got {','.join(header)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise SeriesParseError(f"{path}: line {lineno}: expected 2 fields, got {len(row)}")
            try:
                pairs.append(ErrorPair(float(row[0]), float(row[1])))
            except (ValueError, InvalidArgumentError) as exc:
                raise SeriesParseError(f"{path}: line {lineno}: {exc}") from None
    return SampleSet(tuple(pairs), provenance=str(path))
