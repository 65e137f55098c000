#!/usr/bin/env python3
"""End-to-end pipeline: raw series -> pairs -> prefix protocol -> report.

Replays the full study protocol on synthetic data: extract neighbor pairs
whose forecasts sit in a narrow band, train on growing prefixes, and
compare the observed ramp probability (ORP, full set) with the empirical
one (ERP, prefix) and the worst-case estimates at three confidences.

The same pipeline is available from the shell:

    ramprisk pairs --input series.csv --window 1060:1070 --output pairs.csv
    ramprisk table --input pairs.csv --thresholds 10,20,30 \
        --prefix 200,300,400 --confidence 0.9,0.99,0.999
"""

from ramprisk import (
    Direction,
    PairExtractionSpec,
    RampQuery,
    WassersteinConfig,
    erp,
    estimate,
    prefix_split,
    scan_pairs,
)
from ramprisk.synthetic import generate_series


def main():
    series = generate_series(count=1500, seed=15)
    print(f"synthetic series: {len(series)} periods")

    spec = PairExtractionSpec(window_lo=1060.0, window_hi=1070.0)
    scan = scan_pairs(series, spec)
    samples = scan.samples
    print(f"extracted {len(samples)} pairs "
          f"({scan.eligible} eligible, {scan.skipped_gaps} skipped at gaps)")

    confidences = (0.9, 0.99, 0.999)
    header = (f"{'I':>4} {'dir':>5} {'R(MW)':>6} {'ORP':>8} {'ERP':>8}"
              + "".join(f" {'a=' + str(a):>9}" for a in confidences))
    print("\n" + header)
    for prefix in (200, 300, 400):
        training, full = prefix_split(samples, prefix)
        for direction in (Direction.DOWN, Direction.UP):
            for threshold in (10.0, 20.0, 30.0):
                query = RampQuery(direction, threshold)
                cells = [
                    estimate(
                        training, query, WassersteinConfig.from_confidence(a, prefix)
                    ).ramp_probability
                    for a in confidences
                ]
                print(f"{prefix:>4} {direction.value:>5} {threshold:>6.0f} "
                      f"{erp(full, query):>8.4f} {erp(training, query):>8.4f}"
                      + "".join(f" {c:>9.4f}" for c in cells))

    print("\nreading the table: estimates always sit above the prefix ERP, "
          "approach it as I grows,\nand track the full-set ORP "
          "without ever fitting a parametric distribution")


if __name__ == "__main__":
    main()
