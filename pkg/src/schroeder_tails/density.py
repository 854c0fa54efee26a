"""Density of the martingale limit W: exact by two routes, and the left-tail asymptotic.

The iteration route rescales PGF coefficients, ``p(x) ~ E**t p_{t,[x E**t]}``;
the Fourier route inverts the characteristic function ``Pi(iy)``.
"""
import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from . import errors
from .offspring import DEFAULT_CAP, iterate_pgf
from .poincare import pi_eval, poincare_coeffs
from .spectral import build_multiplier, v_eval

METHODS = ("iteration", "fourier", "monte-carlo", "asymptotic")
NEGATIVE_TOL = 1e-9
RESOLUTION_CELLS = 10


@dataclass(frozen=True)
class DensityGrid:
    xs: np.ndarray
    ps: np.ndarray
    method: str
    params: dict = field(default_factory=dict)
    clamped: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    def __len__(self):
        return self.xs.size

    def at(self, x):
        """Evaluate an iteration grid as the step function ``E**t p_{t,[x E**t]}``."""
        if self.method != "iteration":
            return np.interp(x, self.xs, self.ps, left=0.0, right=0.0)
        x = np.asarray(x, dtype=float)
        scale = self.params["scale"]
        # the relative nudge keeps grid points from rounding into the cell below
        idx = np.floor(x * scale * (1.0 + 1e-12)).astype(np.int64) - self.params["n0"]
        ok = (x >= 0) & (idx >= 0) & (idx < self.ps.size)
        out = np.where(ok, self.ps[np.clip(idx, 0, self.ps.size - 1)], 0.0)
        return out[()] if out.ndim == 0 else out

    def cell_sum(self, weight=None):
        """Riemann sum over the grid cells (left points for iteration grids)."""
        w = self.ps if weight is None else self.ps * weight(self.xs)
        if self.method == "iteration":
            return math.fsum(w) * self.params["spacing"]
        return float(trapezoid(w, self.xs))

    def integral(self):
        return self.cell_sum()

    def first_moment(self):
        return self.cell_sum(lambda x: x)

    def cdf(self):
        """Cumulative trapezoid integral on ``xs``."""
        inc = 0.5 * (self.ps[1:] + self.ps[:-1]) * np.diff(self.xs)
        return np.concatenate([[0.0], np.cumsum(inc)])

    def to_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "p"])
        for x, p in zip(self.xs, self.ps):
            w.writerow([repr(float(x)), repr(float(p))])


def density_by_iteration(d, t, x_range=None, cap=DEFAULT_CAP):
    """Rescaled coefficients ``E**t p_{t,n}`` at ``x_n = n E**-t``."""
    table = iterate_pgf(d, t, cap=cap)
    scale = d.mean ** t
    n = np.arange(table.coeffs.size)
    xs = n / scale
    ps = np.asarray(table.coeffs) * scale
    n0 = 0
    if x_range is not None:
        lo, hi = x_range
        keep = (xs >= lo) & (xs <= hi)
        if not keep.any():
            raise errors.EmptyRange(f"no grid points in [{lo}, {hi}]")
        n0 = int(np.argmax(keep))
        xs, ps = xs[keep], ps[keep]
    params = {"t": t, "scale": scale, "spacing": 1.0 / scale, "n0": n0,
              "binning": "integer part of x*E**t"}
    return DensityGrid(xs, ps, "iteration", params)


@dataclass(frozen=True)
class FourierQuadrature:
    """Trapezoid rule for ``(1/pi) Re int_0^Y Pi(iy) e^{ixy} dy``.

    ``step=None`` means ``min(2 pi / (64 x_max), 0.05)``.  ``Y`` doubles
    from ``y_start`` until ``|Pi(iy)| < tail_tol`` throughout ``[Y, 2Y]``.
    """

    step: float = None
    tail_tol: float = 1e-8
    y_start: float = 16.0
    y_max: float = 2.0 ** 22


def characteristic_samples(pi, x_max, quad=FourierQuadrature()):
    """``(y, Pi(iy))`` on ``[0, 2Y]`` and the cut-off ``Y`` that was reached."""
    h = quad.step or min(2.0 * math.pi / (64.0 * x_max), 0.05)
    ys = [np.arange(0.0, quad.y_start, h)]
    y_hi = quad.y_start
    vals = [pi_eval(pi, 1j * ys[0])]
    while True:
        if 2.0 * y_hi > quad.y_max:
            bound = float(np.max(np.abs(vals[-1])))
            raise errors.TruncationNotReached(
                f"|Pi(iy)| still {bound:.3e} near y = {y_hi:g} (limit {quad.y_max:g})",
                tail_bound=bound)
        n0 = math.ceil(y_hi / h)
        n1 = math.ceil(2.0 * y_hi / h)
        y = np.arange(n0, n1) * h
        v = pi_eval(pi, 1j * y)
        ys.append(y)
        vals.append(v)
        if np.max(np.abs(v)) < quad.tail_tol:
            break
        y_hi *= 2.0
    return np.concatenate(ys), np.concatenate(vals), y_hi, h


def _clamp(ps):
    bad = ps < -NEGATIVE_TOL
    if np.any(bad):
        raise errors.NegativeDensity(
            f"density {ps[bad].min():.3e} below -{NEGATIVE_TOL:g}")
    small = ps < 0
    return np.where(small, 0.0, ps), int(small.sum())


def fourier_density(pi, xs, quad=FourierQuadrature(), samples=None):
    """Inverse Fourier transform of ``Pi(iy)`` at each ``x`` of ``xs`` (all > 0)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(~(xs > 0)):
        raise errors.NonPositiveX("the Fourier route needs x > 0")
    if samples is None:
        samples = characteristic_samples(pi, xs.max(), quad)
    y, v, y_cut, h = samples
    out = np.empty(xs.size)
    rows = max(1, int(4e6 // y.size))
    for i in range(0, xs.size, rows):
        xb = xs[i:i + rows]
        f = (v[None, :] * np.exp(1j * np.multiply.outer(xb, y))).real
        out[i:i + rows] = h * (f.sum(axis=1) - 0.5 * (f[:, 0] + f[:, -1])) / math.pi
    ps, clamped = _clamp(out)
    params = {"step": h, "y_cut": y_cut, "y_end": float(y[-1]), "tail_tol": quad.tail_tol}
    return DensityGrid(xs, ps, "fourier", params, clamped)


def density_by_fourier(pi, x, quad=FourierQuadrature()):
    """``p(x) = (1/2 pi) int Pi(iy) e^{ixy} dy`` at a single ``x > 0``."""
    return float(fourier_density(pi, [x], quad).ps[0])


def asymptotic_density(pm, d, x):
    """``x**alpha V(x)``."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise errors.NonPositiveX("the asymptotic needs x > 0")
    out = x ** d.tail_exponent * v_eval(pm, x)
    return out[()] if out.ndim == 0 else out


def decade_residual(grid, pm, d, x0):
    """``max |p(x) x**-alpha - V(x)|`` over grid points in ``[x0 / E, x0]``."""
    sel = (grid.xs >= x0 / d.mean) & (grid.xs <= x0) & (grid.xs > 0)
    if not sel.any():
        raise errors.EmptyRange(f"no grid points in [{x0 / d.mean:g}, {x0:g}]")
    xs = grid.xs[sel]
    r = grid.ps[sel] * xs ** (-d.tail_exponent) - v_eval(pm, xs)
    return float(np.max(np.abs(r)))


@dataclass(frozen=True)
class ComparisonTable:
    xs: np.ndarray
    p_iter: np.ndarray
    p_fourier: np.ndarray
    p_asym: np.ndarray
    params: dict

    @property
    def ratio(self):
        return self.p_iter / self.p_asym

    def to_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "p_iter", "p_fourier", "p_asym", "ratio"])
        for row in zip(self.xs, self.p_iter, self.p_fourier, self.p_asym, self.ratio):
            w.writerow([repr(float(v)) for v in row])


def compare(d, t, x_range, points=200, pm=None, pi=None, fourier=True, quad=FourierQuadrature()):
    """Exact (iteration, optionally Fourier) versus asymptotic density on a log grid."""
    lo, hi = x_range
    if points < 1 or not lo < hi:
        raise errors.EmptyRange(f"empty x range [{lo}, {hi}] with {points} points")
    if lo < RESOLUTION_CELLS * d.mean ** (-t):
        raise errors.InvalidInput(
            f"xmin = {lo:g} is below the iteration resolution "
            f"{RESOLUTION_CELLS} * E**-{t} = {RESOLUTION_CELLS * d.mean ** (-t):.3e}")
    pi = pi if pi is not None else poincare_coeffs(d)
    pm = pm if pm is not None else build_multiplier(d, pi=pi)
    xs = np.geomspace(lo, hi, points)
    grid = density_by_iteration(d, t)
    p_iter = grid.at(xs)
    p_four = fourier_density(pi, xs, quad).ps if fourier else np.full(xs.size, np.nan)
    p_asym = asymptotic_density(pm, d, xs)
    params = {"t": t, "xmin": lo, "xmax": hi, "points": points, "fourier": fourier,
              "alpha": d.tail_exponent, "mean": d.mean,
              "binning_error": f"O(E**-t) = {d.mean ** (-t):.3e}"}
    return ComparisonTable(xs, p_iter, p_four, p_asym, params)
