"""Command-line interface: ``ramprisk pairs|estimate|table|sweep``.

Ties ingestion, estimation, sweeps and table-style reporting into
reproducible batch runs.  Data outputs are deterministic: fixed column
order, shortest round-trip float formatting, no timestamps (the
``solve_time_s`` diagnostic column of ``estimate`` is the one wall-clock
value).  Exit codes: 0 success, 1 usage error, 2 data/format error,
3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import data
from .domain import (
    Direction,
    EmptySampleError,
    InvalidArgumentError,
    RampQuery,
    SampleSet,
    WassersteinConfig,
)
from .estimator import erp, estimate, radius_from_confidence, sweep
from .lp import SolverFailureError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_SOLVER = 3


class UsageError(Exception):
    """Bad flags or flag combinations; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    """Parsed and validated flags for one command invocation."""

    command: str
    input: Path
    window: Optional[Tuple[float, float]] = None
    window_mode: str = data.WINDOW_MODE_BOTH
    cadence: Optional[float] = None
    p: float = 1.0
    radius: Optional[float] = None
    confidences: Optional[Tuple[float, ...]] = None
    directions: Tuple[Direction, ...] = (Direction.DOWN,)
    thresholds: Optional[Tuple[float, ...]] = None
    prefixes: Optional[Tuple[int, ...]] = None
    grid: Optional[Tuple[float, ...]] = None
    fmt: str = "csv"
    output: Optional[Path] = None


def _parse_float(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"{what} must be a number, got {text!r}") from None
    if math.isnan(value):
        raise UsageError(f"{what} must not be NaN")
    return value


def _parse_window(text: str) -> Tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"--window expects LO:HI, got {text!r}")
    lo = _parse_float(parts[0], "--window LO")
    hi = _parse_float(parts[1], "--window HI")
    if lo > hi:
        raise UsageError(f"--window LO must not exceed HI, got {text!r}")
    return lo, hi


def _parse_grid(text: str) -> Tuple[float, ...]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--grid expects LO:HI:STEP, got {text!r}")
    lo = _parse_float(parts[0], "--grid LO")
    hi = _parse_float(parts[1], "--grid HI")
    step = _parse_float(parts[2], "--grid STEP")
    if step <= 0 or not math.isfinite(step):
        raise UsageError("--grid STEP must be positive and finite")
    if hi <= lo:
        raise UsageError("--grid HI must exceed LO")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    points = tuple(lo + k * step for k in range(count))
    if len(points) < 2:
        raise UsageError("--grid must span at least 2 points")
    return points


def _parse_thresholds(text: str) -> Tuple[float, ...]:
    values = tuple(_parse_float(v, "--thresholds entry") for v in text.split(","))
    if not values:
        raise UsageError("--thresholds must not be empty")
    return values


def _parse_confidences(text: str) -> Tuple[float, ...]:
    values = tuple(_parse_float(v, "--confidence entry") for v in text.split(","))
    for value in values:
        if not 0.0 < value < 1.0:
            raise UsageError(f"--confidence entries must lie in (0, 1), got {value}")
    return values


def _parse_prefixes(text: str) -> Tuple[int, ...]:
    out: List[int] = []
    for item in text.split(","):
        try:
            n = int(item)
        except ValueError:
            raise UsageError(f"--prefix entries must be integers, got {item!r}") from None
        if n < 1:
            raise UsageError(f"--prefix entries must be >= 1, got {n}")
        out.append(n)
    return tuple(out)


def _parse_directions(text: str) -> Tuple[Direction, ...]:
    if text == "both":
        return (Direction.DOWN, Direction.UP)
    return (Direction.parse(text),)


def build_parser() -> _Parser:
    parser = _Parser(prog="ramprisk", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(sub: _Parser, *, directions_default: str) -> None:
        sub.add_argument("--input", required=True, help="series or pairs CSV")
        sub.add_argument("--window", default=None, help="forecast window LO:HI (MW)")
        sub.add_argument(
            "--window-mode",
            choices=(data.WINDOW_MODE_BOTH, data.WINDOW_MODE_FIRST),
            default=data.WINDOW_MODE_BOTH,
            help="require both periods' forecasts in the window, or just the first",
        )
        sub.add_argument("--cadence", default=None, help="expected period spacing, seconds")
        sub.add_argument("--p", default="1", help="metric order: 1, 2, inf (or any p >= 1)")
        sub.add_argument("--radius", default=None, help="explicit ambiguity radius")
        sub.add_argument(
            "--confidence", default=None, help="confidence level list, e.g. 0.9,0.99,0.999"
        )
        sub.add_argument(
            "--direction", choices=("down", "up", "both"), default=directions_default
        )
        sub.add_argument("--format", choices=("csv", "json"), default="csv")
        sub.add_argument("--output", default=None, help="output path (default stdout)")

    pairs = commands.add_parser("pairs", help="extract forecast-error pairs from a series")
    add_common(pairs, directions_default="down")

    est = commands.add_parser("estimate", help="worst-case ramp probabilities")
    add_common(est, directions_default="both")
    est.add_argument("--thresholds", required=True, help="threshold list, MW")

    table = commands.add_parser("table", help="prefix/threshold/confidence report")
    add_common(table, directions_default="both")
    table.add_argument("--thresholds", required=True, help="threshold list, MW")
    table.add_argument("--prefix", required=True, help="prefix count list")

    swp = commands.add_parser("sweep", help="threshold sweep (quasi-distribution curve)")
    add_common(swp, directions_default="down")
    swp.add_argument("--grid", required=True, help="threshold grid LO:HI:STEP, MW")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    radius = None if args.radius is None else _parse_float(args.radius, "--radius")
    if radius is not None and (radius < 0 or not math.isfinite(radius)):
        raise UsageError(f"--radius must be finite and >= 0, got {radius}")
    confidences = None if args.confidence is None else _parse_confidences(args.confidence)

    needs_budget = args.command in ("estimate", "table", "sweep")
    if needs_budget:
        if (radius is None) == (confidences is None):
            raise UsageError("supply exactly one of --radius or --confidence")

    p = _parse_float(args.p, "--p")
    if p < 1.0:
        raise UsageError(f"--p must be >= 1, got {p}")

    cadence = None if args.cadence is None else _parse_float(args.cadence, "--cadence")
    directions = _parse_directions(args.direction)
    if args.command == "sweep" and len(directions) != 1:
        raise UsageError("sweep needs a single direction (down or up)")
    if args.command == "sweep" and confidences is not None and len(confidences) != 1:
        raise UsageError("sweep takes exactly one --confidence value")

    return RunConfig(
        command=args.command,
        input=Path(args.input),
        window=None if args.window is None else _parse_window(args.window),
        window_mode=args.window_mode,
        cadence=cadence,
        p=p,
        radius=radius,
        confidences=confidences,
        directions=directions,
        thresholds=(
            _parse_thresholds(args.thresholds) if getattr(args, "thresholds", None) else None
        ),
        prefixes=_parse_prefixes(args.prefix) if getattr(args, "prefix", None) else None,
        grid=_parse_grid(args.grid) if getattr(args, "grid", None) else None,
        fmt=args.format,
        output=None if args.output is None else Path(args.output),
    )


def _extraction_spec(config: RunConfig) -> data.PairExtractionSpec:
    lo, hi = config.window if config.window is not None else (-math.inf, math.inf)
    return data.PairExtractionSpec(
        window_lo=lo,
        window_hi=hi,
        cadence=config.cadence,
        window_mode=config.window_mode,
    )


def _sniff_header(path: Path) -> Tuple[str, ...]:
    with path.open("r", encoding="utf-8-sig", newline="") as handle:
        first = handle.readline()
    return tuple(part.strip() for part in first.strip().split(","))


def _load_samples(config: RunConfig) -> SampleSet:
    header = _sniff_header(config.input)
    if header == data.PAIRS_HEADER:
        return data.read_pairs(config.input)
    if header == data.SERIES_HEADER:
        series = data.load_series(config.input)
        return data.extract_pairs(series, _extraction_spec(config))
    raise data.SeriesFormatError(
        f"{config.input}: unrecognized header {','.join(header)!r};"
        f" expected a series or pairs CSV"
    )


def _emit_csv(columns: Sequence[str], rows: Sequence[Dict[str, object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns])
    return buffer.getvalue()


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit_json(rows: Sequence[Dict[str, object]]) -> str:
    return json.dumps(list(rows), indent=2) + "\n"


def _write_output(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def _render(config: RunConfig, columns: Sequence[str], rows: Sequence[Dict[str, object]]) -> None:
    text = _emit_csv(columns, rows) if config.fmt == "csv" else _emit_json(rows)
    _write_output(text, config.output)


def _budget_cells(config: RunConfig, sample_count: int) -> List[Tuple[Optional[float], float]]:
    """(confidence, radius) cells for one sample count; confidence None when explicit."""
    if config.radius is not None:
        return [(None, config.radius)]
    assert config.confidences is not None
    return [(a, radius_from_confidence(a, sample_count)) for a in config.confidences]


def cmd_pairs(config: RunConfig) -> int:
    series = data.load_series(config.input)
    scan = data.scan_pairs(series, _extraction_spec(config))
    if config.fmt == "csv":
        buffer = io.StringIO()
        data.write_pairs_to(scan.samples, buffer)
        _write_output(buffer.getvalue(), config.output)
    else:
        rows = [{"dw1_mw": p.dw1, "dw2_mw": p.dw2} for p in scan.samples]
        _write_output(_emit_json(rows), config.output)
    print(
        f"pairs: {len(scan.samples)} extracted ({scan.eligible} eligible,"
        f" {scan.skipped_gaps} skipped at cadence gaps)",
        file=sys.stderr,
    )
    if len(scan.samples) == 0:
        print("warning: no pairs matched the forecast window", file=sys.stderr)
    return EXIT_OK


def cmd_estimate(config: RunConfig) -> int:
    samples = _load_samples(config)
    if len(samples) == 0:
        raise EmptySampleError(f"{config.input}: no samples to estimate from")
    assert config.thresholds is not None
    rows: List[Dict[str, object]] = []
    for direction in config.directions:
        for threshold in config.thresholds:
            query = RampQuery(direction, threshold)
            empirical = erp(samples, query)
            for confidence, radius in _budget_cells(config, len(samples)):
                cfg = WassersteinConfig(p=config.p, radius=radius)
                start = time.perf_counter()
                result = estimate(samples, query, cfg)
                elapsed = time.perf_counter() - start
                rows.append(
                    {
                        "direction": direction.value,
                        "threshold_mw": threshold,
                        "confidence": confidence,
                        "erp": empirical,
                        "ramp_probability": result.ramp_probability,
                        "inner_value": result.inner_value,
                        "gamma_star": result.gamma_star,
                        "radius_used": result.radius_used,
                        "solve_time_s": elapsed,
                    }
                )
    columns = [
        "direction",
        "threshold_mw",
        "confidence",
        "erp",
        "ramp_probability",
        "inner_value",
        "gamma_star",
        "radius_used",
        "solve_time_s",
    ]
    _render(config, columns, rows)
    return EXIT_OK


def _estimate_labels(config: RunConfig) -> List[str]:
    if config.radius is not None:
        return ["estimate"]
    assert config.confidences is not None
    return [f"alpha_{a:g}" for a in config.confidences]


def cmd_table(config: RunConfig) -> int:
    samples = _load_samples(config)
    assert config.thresholds is not None and config.prefixes is not None
    for prefix in config.prefixes:
        if prefix > len(samples):
            raise InvalidArgumentError(
                f"prefix {prefix} exceeds the {len(samples)} available pairs"
            )
    labels = _estimate_labels(config)
    rows: List[Dict[str, object]] = []
    for prefix in config.prefixes:
        training, full = data.prefix_split(samples, prefix)
        for direction in config.directions:
            for threshold in config.thresholds:
                query = RampQuery(direction, threshold)
                row: Dict[str, object] = {
                    "prefix": prefix,
                    "direction": direction.value,
                    "threshold_mw": threshold,
                    "orp": erp(full, query),
                    "erp": erp(training, query),
                }
                for label, (_, radius) in zip(labels, _budget_cells(config, prefix)):
                    cfg = WassersteinConfig(p=config.p, radius=radius)
                    row[label] = estimate(training, query, cfg).ramp_probability
                rows.append(row)
    columns = ["prefix", "direction", "threshold_mw", "orp", "erp", *labels]
    _render(config, columns, rows)
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    samples = _load_samples(config)
    if len(samples) == 0:
        raise EmptySampleError(f"{config.input}: no samples to sweep over")
    assert config.grid is not None
    (confidence_radius,) = _budget_cells(config, len(samples))
    cfg = WassersteinConfig(p=config.p, radius=confidence_radius[1])
    curve = sweep(samples, config.directions[0], config.grid, cfg)
    rows = [
        {
            "threshold_mw": float(t),
            "ramp_probability": float(p),
            "quasi_density": float(d),
        }
        for t, p, d in zip(curve.thresholds, curve.ramp_probabilities, curve.density)
    ]
    _render(config, ["threshold_mw", "ramp_probability", "quasi_density"], rows)
    print(
        "note: worst-case distributions may differ per threshold;"
        " the curve is an envelope, not one distribution's CDF",
        file=sys.stderr,
    )
    return EXIT_OK


COMMANDS = {
    "pairs": cmd_pairs,
    "estimate": cmd_estimate,
    "table": cmd_table,
    "sweep": cmd_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config_from_args(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return COMMANDS[config.command](config)
    except (data.SeriesParseError, data.SeriesFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (EmptySampleError, InvalidArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SolverFailureError as exc:
        print(f"error: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
