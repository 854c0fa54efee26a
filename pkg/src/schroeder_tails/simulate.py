"""Monte Carlo Galton-Watson trees and a Kolmogorov-Smirnov harness.

Only the generation size ``Z_t`` is needed, so each generation is drawn in
aggregate: the family-size counts of ``Z`` parents are one multinomial
draw, which has exactly the law of ``Z`` independent offspring variates.

Trees are grouped in fixed blocks; block ``b`` draws from its own Philox
stream spawned from the seed, so the sample set does not depend on how
blocks are scheduled across threads.
"""
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import errors
from .density import DensityGrid

POPULATION_CAP = 2 ** 53
BLOCK = 4096


def thread_count():
    """Worker threads, capped by ``SCHROEDER_TAILS_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("SCHROEDER_TAILS_THREADS", "1")))
    except ValueError:
        return 1


def _step(z, probs, rng):
    counts = rng.multinomial(z, probs)
    return counts @ np.arange(len(probs), dtype=np.int64)


def gw_population(d, t, rng, cap=POPULATION_CAP):
    """One realisation of ``Z_t`` with ``Z_0 = 1``."""
    if t < 0:
        raise errors.InvalidInput("t must be >= 0")
    z = np.ones(1, dtype=np.int64)
    for _ in range(t):
        z = _step(z, d.coeffs, rng)
        if z[0] > cap:
            raise errors.PopulationOverflow(f"Z exceeded {cap}")
    return int(z[0])


@dataclass(frozen=True)
class SimulationRun:
    t: int
    n: int
    seed: int
    w_samples: np.ndarray

    def summary(self):
        w = self.w_samples
        std = float(w.std(ddof=1)) if w.size > 1 else 0.0
        return {"t": self.t, "n": self.n, "seed": self.seed, "mean": float(w.mean()),
                "std": std, "stderr": std / math.sqrt(w.size),
                "min": float(w.min()), "max": float(w.max())}

    def histogram_grid(self, bins=200):
        """Empirical density as a grid (bin centres, normalised histogram)."""
        dens, edges = np.histogram(self.w_samples, bins=bins, density=True)
        xs = np.concatenate([[edges[0]], 0.5 * (edges[1:] + edges[:-1]), [edges[-1]]])
        ps = np.concatenate([[0.0], dens, [0.0]])
        return DensityGrid(xs, ps, "monte-carlo", {"bins": bins, "n": self.n})


def _block(d, t, size, seq, cap):
    rng = np.random.Generator(np.random.Philox(seq))
    z = np.ones(size, dtype=np.int64)
    for _ in range(t):
        z = _step(z, d.coeffs, rng)
        if z.max() > cap:
            raise errors.PopulationOverflow(f"Z exceeded {cap}")
    return z


def simulate(d, t, n, seed, cap=POPULATION_CAP, threads=None):
    """``n`` independent trees to depth ``t``; returns ``E**-t Z_t`` samples."""
    if n < 1:
        raise errors.InvalidInput("n must be >= 1")
    if t < 0:
        raise errors.InvalidInput("t must be >= 0")
    n_blocks = -(-n // BLOCK)
    seqs = np.random.SeedSequence(seed).spawn(n_blocks)
    sizes = [min(BLOCK, n - b * BLOCK) for b in range(n_blocks)]
    workers = threads or thread_count()
    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda b: _block(d, t, sizes[b], seqs[b], cap), range(n_blocks)))
    else:
        parts = [_block(d, t, sizes[b], seqs[b], cap) for b in range(n_blocks)]
    z = np.concatenate(parts)
    w = z / d.mean ** t
    w.flags.writeable = False
    return SimulationRun(t, n, seed, w)


def ks_distance(run, grid, coverage_tol=1e-3):
    """Kolmogorov-Smirnov statistic between the samples and a density grid's CDF."""
    w = np.sort(run.w_samples)
    outside = np.mean((w < grid.xs[0]) | (w > grid.xs[-1]))
    if outside > coverage_tol:
        raise errors.GridCoverage(
            f"{outside:.2e} of the samples fall outside the grid "
            f"[{grid.xs[0]:g}, {grid.xs[-1]:g}]")
    cdf = np.interp(w, grid.xs, grid.cdf())
    m = w.size
    upper = np.arange(1, m + 1) / m - cdf
    lower = cdf - np.arange(0, m) / m
    return float(max(upper.max(), lower.max(), 0.0))
