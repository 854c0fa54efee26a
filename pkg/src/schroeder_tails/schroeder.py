"""The Schroeder function: ``Phi(P(z)) = p1 Phi(z)``, ``Phi(0) = 0``, ``Phi'(0) = 1``."""
from dataclasses import dataclass

import numpy as np

from . import errors, kernels
from .offspring import DEFAULT_CAP, OffspringDistribution, pgf_eval
from .series import PowerSeries, compose_poly

DIRECT_RADIUS = 0.3
TAIL_TOL = 1e-14
MAX_ORDER = 512
MAX_STEPS = 10_000


@dataclass(frozen=True)
class SchroederSeries:
    phi: PowerSeries
    dist: OffspringDistribution
    radius: float = DIRECT_RADIUS

    @property
    def order(self):
        return self.phi.order

    def __call__(self, w):
        return phi_eval(self, w)


def schroeder_coeffs(d, order):
    """Taylor coefficients ``phi_0 .. phi_order`` by matching powers of z.

    At ``z**n`` the unknown ``phi_n`` enters with ``p1**n`` on the left
    and ``p1`` on the right, so ``phi_n`` is the sum of the known
    lower-order contributions divided by ``p1 - p1**n``.
    """
    if order < 2:
        raise errors.InvalidInput("order must be >= 2")
    phi = kernels.schroeder_sweep(d.coeffs, int(order))
    return SchroederSeries(PowerSeries(phi), d)


def schroeder_series(d, radius=DIRECT_RADIUS, tol=TAIL_TOL, max_order=MAX_ORDER):
    """Coefficients with the order doubled until ``|phi_M| radius**M < tol``."""
    order = 16
    while True:
        s = schroeder_coeffs(d, order)
        if s.phi.remainder_bound(radius) < tol or order >= max_order:
            return SchroederSeries(s.phi, d, radius)
        order = min(2 * order, max_order)


def phi_via_limit(d, t, order, cap=DEFAULT_CAP):
    """Coefficients of ``p1**-t * (P o ... o P)(z)`` through ``order``.

    Builds ``R_s = p1**-s Q_s`` step by step as ``R_s = A_s(R_{s-1})`` with
    ``A_s(w) = p1**-s P(p1**(s-1) w)``, a plain truncated composition that
    never forms the vanishing ``p1**t`` explicitly.
    """
    if t < 1:
        raise errors.InvalidInput("t must be >= 1")
    if order + 1 > cap:
        raise errors.CapExceeded(f"order {order} exceeds coefficient cap {cap}")
    p = d.coeffs
    j = np.arange(p.size)
    r = PowerSeries.from_coeffs(p / d.p1, order)
    for s in range(2, t + 1):
        with np.errstate(under="ignore"):
            a = p * d.p1 ** ((s - 1) * j - s)
        r = compose_poly(a, r, order)
    return r


def phi_eval(S, w, extra_steps=0):
    """``Phi(w)`` for real ``0 <= w < 1``.

    Applies ``P`` until the iterate is below the direct-summation radius
    (k steps), sums the series there and rescales by ``p1**-k``.
    ``extra_steps`` adds further reductions; the value must not change.
    """
    w = np.asarray(w, dtype=float)
    if np.any(w < 0.0) or np.any(w >= 1.0):
        raise errors.InvalidInput("phi_eval needs 0 <= w < 1")
    d = S.dist
    x = w.copy()
    k = np.zeros(w.shape, dtype=int)
    todo = x >= S.radius
    while np.any(todo):
        x[todo] = pgf_eval(d, x[todo])
        k[todo] += 1
        if k.max() > MAX_STEPS:
            raise errors.NoConvergence("argument reduction did not reach the series radius")
        todo = x >= S.radius
    for _ in range(extra_steps):
        x = pgf_eval(d, x)
        k += 1
    out = S.phi(x) * np.power(d.p1, -k.astype(float))
    return out[()] if out.ndim == 0 else out


def functional_residual(S, z):
    """``|Phi(P(z)) - p1 Phi(z)|`` from the series alone (small ``|z|``)."""
    z = np.asarray(z)
    d = S.dist
    return np.abs(S.phi(pgf_eval(d, z)) - d.p1 * S.phi(z))
