"""Offspring laws, their generating functions, and t-fold PGF iteration."""
import csv
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.signal import fftconvolve

from . import errors
from .series import compose_poly

SUM_TOL = 1e-12
DEFAULT_CAP = 2 ** 24
# products with more work than this go through the FFT
DIRECT_LIMIT = 2 ** 22
# low-order coefficients recomputed exactly after an FFT step
HEAD_ORDER = 4096
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class OffspringDistribution:
    """A validated offspring law ``p_0 .. p_N``; build it with :func:`validate`."""

    probs: tuple
    mean: float
    tail_exponent: float

    @property
    def degree(self):
        return len(self.probs) - 1

    @property
    def p1(self):
        return self.probs[1]

    @cached_property
    def coeffs(self):
        c = np.array(self.probs, dtype=float)
        c.flags.writeable = False
        return c

    @cached_property
    def shifted(self):
        """Taylor coefficients of ``P`` about ``z = 1``: ``P^(k)(1) / k!``."""
        n = self.degree
        c = np.array([
            sum(math.comb(j, k) * self.probs[j] for j in range(k, n + 1))
            for k in range(n + 1)
        ])
        c.flags.writeable = False
        return c


def validate(probs):
    """Check an offspring law and return it with its mean and tail exponent.

    The sum may miss 1 by at most ``1e-12``; such inputs are rescaled,
    anything further off is rejected.
    """
    p = [float(v) for v in probs]
    while len(p) > 3 and p[-1] == 0.0:
        p.pop()
    if len(p) < 3:
        raise errors.InvalidDistribution(
            "need at least p0, p1, p2 (polynomial of degree >= 2)")
    if p[0] != 0.0:
        raise errors.NonZeroP0(
            f"p0 = {p[0]!r}; only p0 = 0 is supported "
            "(the Harris-Sevastyanov reduction of p0 > 0 is out of scope)")
    if any(not math.isfinite(v) or v < 0.0 for v in p):
        raise errors.NotNormalized("probabilities must be finite and >= 0")
    total = math.fsum(p)
    if abs(total - 1.0) > SUM_TOL:
        raise errors.NotNormalized(
            f"probabilities sum to {total!r}, tolerance {SUM_TOL}")
    p = [v / total for v in p]
    if not 0.0 < p[1] < 1.0:
        raise errors.P1OutOfRange(f"need 0 < p1 < 1, got {p[1]!r}")
    if p[-1] <= 0.0:
        raise errors.InvalidDistribution("leading coefficient must be positive")
    if not any(p[k] * p[k + 1] != 0.0 for k in range(1, len(p) - 1)):
        raise errors.PeriodicSupport(
            "no k with p_k * p_{k+1} != 0")
    mean = math.fsum(j * v for j, v in enumerate(p))
    if mean <= 1.0:
        raise errors.Subcritical(f"mean {mean!r} <= 1")
    alpha = -math.log(mean * p[1]) / math.log(mean)
    return OffspringDistribution(tuple(p), mean, alpha)


def parse_probs(text):
    """``"0,0.1,0.5,0.4"`` -> list of floats."""
    try:
        return [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError as exc:
        raise errors.InvalidInput(f"cannot parse probabilities {text!r}") from exc


def pgf_eval(d, z):
    """``P(z) = sum p_j z**j`` by Horner; ``z`` may be a scalar or array."""
    z = np.asarray(z)
    acc = np.full(z.shape, d.probs[-1], dtype=np.result_type(z, float))
    for c in d.probs[-2::-1]:
        acc = acc * z + c
    return acc[()] if acc.ndim == 0 else acc


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients of ``P o ... o P`` (t times).

    ``coeffs`` holds ``p_{t,0} ..``; trailing entries that are zero in
    double precision are not stored, ``degree`` is the nominal ``N**t``.
    """

    t: int
    coeffs: np.ndarray
    degree: int

    def coeff(self, n):
        return float(self.coeffs[n]) if 0 <= n < self.coeffs.size else 0.0

    def total(self):
        return math.fsum(self.coeffs)

    def to_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "p_tn"])
        for n, v in enumerate(self.coeffs):
            w.writerow([n, repr(float(v))])


def _fft_error(a, b):
    # forward error of an FFT convolution, elementwise, conservatively
    n = a.size + b.size - 1
    return 4.0 * _EPS * math.log2(max(n, 2)) * np.linalg.norm(a) * np.linalg.norm(b)


def compose_coefficients(outer, inner):
    """Full coefficients of ``outer(inner(z))`` and an absolute error bound.

    Direct convolution when cheap, FFT otherwise.  ``inner`` is assumed to
    have nonnegative coefficients summing to at most 1 (a PGF), which keeps
    the propagated bound from growing across Horner steps.
    """
    outer = np.asarray(outer, dtype=float)
    inner = np.asarray(inner, dtype=float)
    acc = np.array([outer[-1]])
    err = 0.0
    l1 = np.abs(inner).sum()
    for c in outer[-2::-1]:
        if acc.size * inner.size <= DIRECT_LIMIT:
            nxt = np.convolve(acc, inner)
            err = err * l1
        else:
            nxt = fftconvolve(acc, inner)
            err = err * l1 + _fft_error(acc, inner)
        nxt[0] += c
        acc = nxt
    return acc, err


def iterate_pgf(d, t, cap=DEFAULT_CAP, head=HEAD_ORDER):
    """Coefficient table of the t-fold composition ``P o ... o P``.

    Large steps use FFT products.  Afterwards, coefficients whose size is
    within the propagated rounding bound are set to zero (their true
    values are positive but below what double precision resolves), and the
    first ``head + 1`` coefficients are replaced by an exact truncated
    composition so that the left tail keeps full relative accuracy.
    """
    if t < 1:
        raise errors.InvalidInput("t must be >= 1")
    degree = d.degree ** t
    if degree > cap:
        raise errors.CapExceeded(
            f"N**t = {d.degree}**{t} = {degree} exceeds coefficient cap {cap}")
    p = d.coeffs
    q = p.copy()
    q_head = q[: head + 1]
    for _ in range(2, t + 1):
        acc, err = compose_coefficients(p, q)
        if err > 0.0:
            if acc.min() < -err:
                raise errors.NumericalGuard("FFT rounding exceeded its error bound")
            acc[acc <= err] = 0.0
            q_head = compose_poly(p, q_head, min(head, acc.size - 1)).coeffs
            acc[: q_head.size] = q_head
        else:
            q_head = acc[: head + 1]
        nz = np.flatnonzero(acc)
        q = acc[: nz[-1] + 1] if nz.size else acc[:1]
    q = np.array(q, dtype=float)
    q.flags.writeable = False
    return CoefficientTable(t, q, degree)
