"""Karlin-McGregor function, its Fourier coefficients, and the periodic multiplier.

``K*(z) = Phi(Pi(E**z)) p1**-z`` is 1-periodic on the real line.  Its
Fourier coefficients ``theta_m`` define

    K0(z) = sum_m theta_m exp(2 pi i m z) / Gamma(-(2 pi i m + ln p1) / ln E)

and the left-tail multiplier ``V(x) = K0(-ln x / ln E)``.
"""
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import errors
from .gamma import complex_gamma
from .poincare import poincare_coeffs, pi_eval
from .schroeder import phi_eval, schroeder_series

DEFAULT_GRID = 1024
TRUNCATION_TOL = 1e-14
ALIAS_TOL = 1e-10
RESIDUE_TOL = 1e-10
SHIFT_THRESHOLD = 0.1


def kstar_eval(phi, pi, d, z, extra_shift=0):
    """``K*(z)`` for real ``z``.

    ``z`` is reduced to ``[0, 1)``, then shifted up by the smallest integer
    ``s`` with ``Pi(E**(z+s)) < 0.1`` so that ``Phi`` is summed well inside
    its disk; ``extra_shift`` adds further unit shifts (the value must not
    change, by periodicity).
    """
    z = np.asarray(z, dtype=float)
    frac = z - np.floor(z)
    ln_e = math.log(d.mean)
    s = np.zeros(frac.shape)
    w = np.asarray(pi_eval(pi, np.exp(frac * ln_e)), dtype=float)
    todo = w >= SHIFT_THRESHOLD
    while np.any(todo):
        s[todo] += 1.0
        w[todo] = pi_eval(pi, np.exp((frac[todo] + s[todo]) * ln_e))
        todo = w >= SHIFT_THRESHOLD
    if extra_shift:
        s = s + extra_shift
        w = np.asarray(pi_eval(pi, np.exp((frac + s) * ln_e)), dtype=float)
    out = phi_eval(phi, w) * np.exp(-(frac + s) * math.log(d.p1))
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class KarlinMcGregorSpectrum:
    """Retained coefficients ``theta_m``, ``|m| <= m_max``, stored at ``m + m_max``.

    ``raw`` keeps the whole DFT in signed order ``m = -G/2 .. G/2 - 1``.
    ``decay_rate`` is minus the log-linear slope of ``|theta_m|`` over
    ``2 pi``: an empirical lower proxy for the half-width of the strip of
    analyticity, reported for diagnostics only.
    """

    theta: np.ndarray
    grid_size: int
    decay_rate: float
    raw: np.ndarray

    @property
    def m_max(self):
        return (self.theta.size - 1) // 2

    @property
    def ms(self):
        return np.arange(-self.m_max, self.m_max + 1)

    def coefficient(self, m):
        return complex(self.theta[m + self.m_max]) if abs(m) <= self.m_max else 0j

    def raw_coefficient(self, m):
        return complex(self.raw[m + self.grid_size // 2])

    def __call__(self, z):
        """Truncated Fourier series ``sum theta_m exp(2 pi i m z)`` (real part)."""
        z = np.asarray(z, dtype=float)
        ph = np.exp(2j * math.pi * np.multiply.outer(z, self.ms))
        out = (ph @ self.theta).real
        return out[()] if out.ndim == 0 else out


def fourier_coeffs(samples, trunc_tol=TRUNCATION_TOL, alias_tol=ALIAS_TOL):
    """Spectrum of a 1-periodic function from ``G`` uniform samples on ``[0, 1)``."""
    samples = np.asarray(samples, dtype=float)
    g = samples.size
    if g < 4 or g & (g - 1):
        raise errors.InvalidInput(f"grid size must be a power of two >= 4, got {g}")
    half = np.fft.rfft(samples) / g
    # real input: build the negative band as conjugates so symmetry is exact
    full = np.concatenate([half, np.conj(half[-2:0:-1])])
    raw = np.fft.fftshift(full)
    # tolerances are relative to the largest coefficient (theta_0 for K*)
    scale = np.abs(full).max()
    if scale == 0.0:
        raise errors.InvalidInput("all samples are zero")
    nyq = abs(full[g // 2])
    if nyq > alias_tol * scale:
        raise errors.AliasingSuspected(
            f"|theta| at the Nyquist band is {nyq / scale:.3e} of the largest "
            f"coefficient (limit {alias_tol:g}); increase the grid")
    floor = trunc_tol * scale
    m_max = 0
    while m_max + 1 < g // 2 and max(abs(full[m_max + 1]), abs(full[-(m_max + 1)])) >= floor:
        m_max += 1
    idx = np.arange(-m_max, m_max + 1)
    theta = full[idx]
    if m_max >= 1:
        m = np.arange(0, m_max + 1)
        mag = 0.5 * (np.abs(full[m]) + np.abs(full[-m]))
        slope = np.polyfit(m, np.log(mag), 1)[0]
        decay = -slope / (2.0 * math.pi)
    else:
        decay = math.inf
    return KarlinMcGregorSpectrum(theta, g, decay, raw)


def karlin_mcgregor_spectrum(d, grid=DEFAULT_GRID, phi=None, pi=None):
    """Sample ``K*`` on ``j / grid`` and transform."""
    phi = phi if phi is not None else schroeder_series(d)
    pi = pi if pi is not None else poincare_coeffs(d)
    z = np.arange(grid) / grid
    return fourier_coeffs(kstar_eval(phi, pi, d, z))


def gamma_argument(m, ln_p1, ln_e):
    return -(2j * math.pi * np.asarray(m) + ln_p1) / ln_e


@dataclass(frozen=True)
class PeriodicMultiplier:
    spectrum: KarlinMcGregorSpectrum
    ln_E: float
    ln_p1: float

    @cached_property
    def weights(self):
        """``theta_m / Gamma(...)``: the Fourier coefficients of ``K0``."""
        ms = self.spectrum.ms
        g = complex_gamma(gamma_argument(ms, self.ln_p1, self.ln_E))
        # Gamma at conjugate arguments is conjugate; keep the pairing exact
        g = np.where(ms < 0, np.conj(g[::-1]), g)
        return self.spectrum.theta / g

    def k0(self, z):
        return k0_eval(self, z)

    def v(self, x):
        return v_eval(self, x)


def periodic_multiplier(spectrum, d):
    return PeriodicMultiplier(spectrum, math.log(d.mean), math.log(d.p1))


def build_multiplier(d, grid=DEFAULT_GRID, phi=None, pi=None):
    return periodic_multiplier(karlin_mcgregor_spectrum(d, grid, phi, pi), d)


def k0_terms(pm, z):
    """Individual terms of the ``K0`` series at ``z``, columns ordered by ``m``."""
    z = np.asarray(z, dtype=float)
    ph = np.exp(2j * math.pi * np.multiply.outer(z, pm.spectrum.ms))
    return ph * pm.weights


def k0_eval(pm, z, residue_tol=RESIDUE_TOL):
    """``K0(z)``; raises :class:`ImagResidueTooLarge` if the sum is not real."""
    terms = k0_terms(pm, z)
    total = terms.sum(axis=-1)
    resid = np.max(np.abs(total.imag)) if total.size else 0.0
    if resid > residue_tol:
        raise errors.ImagResidueTooLarge(
            f"imaginary residue {resid:.3e} exceeds {residue_tol:g}")
    out = total.real
    return out[()] if out.ndim == 0 else out


def v_eval(pm, x):
    """``V(x) = K0(-ln x / ln E)`` for ``x > 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise errors.NonPositiveX("V(x) needs x > 0")
    return k0_eval(pm, -np.log(x) / pm.ln_E)
