"""The Poincare function: ``P(Pi(z)) = Pi(E z)``, ``Pi(0) = 1``, ``Pi'(0) = -1``.

``Pi`` is entire.  Its Taylor series is summed only inside a trusted
disk of radius ``R0``; larger arguments are pulled into the disk by
powers of ``E`` and pushed back out through ``P``.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import errors, kernels
from .offspring import OffspringDistribution, pgf_eval
from .series import PowerSeries

DEFAULT_ORDER = 64
TAIL_TOL = 1e-13
# sum |u_n| R0**n may exceed the leading term R0 by at most this factor
CANCELLATION = 4.0
LIMIT_DEPTH = 40


@dataclass(frozen=True)
class PoincareEvaluator:
    pi_series: PowerSeries
    trusted_radius: float
    dist: OffspringDistribution

    def __call__(self, z):
        return pi_eval(self, z)


def _trusted_radius(coeffs):
    a = np.abs(coeffs[1:])
    n = np.arange(1, coeffs.size)
    last = a[-1]
    r_tail = (TAIL_TOL / last) ** (1.0 / n[-1]) if last > 0 else 1e3
    r_tail = min(r_tail, 1e3)

    def spread(r):
        return np.sum(a * r ** n) / r

    if spread(r_tail) <= CANCELLATION:
        return r_tail
    lo, hi = 0.0, r_tail
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mid == 0.0 or spread(mid) <= CANCELLATION:
            lo = mid
        else:
            hi = mid
    return lo


def poincare_coeffs(d, order=DEFAULT_ORDER):
    """Taylor coefficients of ``Pi`` plus the radius where they can be summed.

    At ``z**n`` the unknown ``pi_n`` enters through ``P'(1) = E`` on the
    left and ``E**n`` on the right, hence ``pi_n = (...)/(E**n - E)``.
    """
    if order < 2:
        raise errors.InvalidInput("order must be >= 2")
    u = kernels.poincare_recursion(d.shifted, d.mean, int(order))
    coeffs = np.array(u, dtype=float)
    coeffs[0] = 1.0
    return PoincareEvaluator(PowerSeries(coeffs), _trusted_radius(coeffs), d)


def _offset_series(ev, z):
    c = ev.pi_series.coeffs
    acc = np.full(z.shape, c[-1], dtype=complex)
    for v in c[-2:0:-1]:
        acc = acc * z + v
    return acc * z


def pi_eval(ev, z, extra_steps=0):
    """``Pi(z)``: sum at ``E**-k z`` (smallest k with modulus <= R0), apply ``P`` k times."""
    z = np.asarray(z)
    real = np.isrealobj(z)
    zc = z.astype(complex)
    d = ev.dist
    mod = np.abs(zc)
    with np.errstate(divide="ignore"):
        k = np.ceil(np.log(mod / ev.trusted_radius) / math.log(d.mean))
    k = np.where(np.isfinite(k), np.maximum(k, 0), 0).astype(np.int64)
    over = mod / d.mean ** k > ev.trusted_radius
    k[over] += 1
    k += extra_steps
    u0 = _offset_series(ev, zc / d.mean ** k)
    out = kernels.reduce_iterate(d.coeffs, d.shifted, u0, k)
    if real:
        out = out.real
    return out[()] if np.ndim(out) == 0 else out


def pi_via_limit(d, z, t=LIMIT_DEPTH):
    """``(P o ... o P)(1 - E**-t z)``, t-fold, evaluated pointwise.

    The starting offset ``-E**-t z`` is fed to the iteration directly so
    that it is not rounded against 1.
    """
    if t < 1:
        raise errors.InvalidInput("t must be >= 1")
    z = np.asarray(z)
    real = np.isrealobj(z)
    u0 = -z.astype(complex) * float(d.mean) ** (-t)
    out = kernels.reduce_iterate(d.coeffs, d.shifted, u0, np.full(u0.shape, t, dtype=np.int64))
    if real:
        out = out.real
    return out[()] if np.ndim(out) == 0 else out


def limit_plateau(d, z, tol=1e-9, t_max=200):
    """Smallest t with ``|limit_t(z) - limit_{t+1}(z)| < tol``."""
    prev = pi_via_limit(d, z, 1)
    for t in range(1, t_max):
        nxt = pi_via_limit(d, z, t + 1)
        if abs(nxt - prev) < tol:
            return t
        prev = nxt
    raise errors.NoConvergence(f"no plateau below {tol} by t = {t_max}")


def functional_residual(ev, z):
    """``|P(Pi(z)) - Pi(E z)|`` from the series alone, for ``|z| <= R0 / E``."""
    z = np.asarray(z, dtype=complex)
    s = ev.pi_series
    return np.abs(pgf_eval(ev.dist, s(z)) - s(ev.dist.mean * z))
