"""Shared test helpers: independent oracles and random instance makers."""

import numpy as np

from ramprisk import SampleSet


def dense_grid_oracle(margins, radius, scale, hi=10.0, step=1e-5):
    """Brute-force maximization of the dual objective on a dense gamma grid.

    Independent of the library's solver: evaluates
    (1/I) * sum_i min(1, gamma*g_i/scale) - gamma*radius directly.
    Accurate to ~max_slope*step near the optimum.
    """
    g = np.asarray(margins, dtype=float)
    pos = g[g > 0.0]
    count = g.size
    best_value = -np.inf
    best_gamma = 0.0
    chunk = 200_000
    total = int(round(hi / step)) + 1
    for start in range(0, total, chunk):
        gammas = (np.arange(start, min(start + chunk, total))) * step
        if pos.size == 0:
            values = -gammas * radius
        else:
            values = (
                np.minimum(1.0, np.outer(gammas, pos) / scale).sum(axis=1) / count
                - gammas * radius
            )
        k = int(np.argmax(values))
        if values[k] > best_value:
            best_value = float(values[k])
            best_gamma = float(gammas[k])
    return best_value, best_gamma


def random_sample_set(rng, max_pairs=40, spread_mw=20.0):
    n = int(rng.integers(1, max_pairs + 1))
    values = rng.uniform(-spread_mw, spread_mw, size=(n, 2))
    return SampleSet.from_tuples([(float(a), float(b)) for a, b in values])
