"""Complex Gamma function, guarded at the poles.

Thin layer over ``scipy.special``; its relative error is about 3e-13 for
``|Im z| <= 200``, ``-1/2 <= Re z <= 50`` (checked against mpmath in the
tests).
"""
import numpy as np
from scipy import special

from . import errors


def log_gamma(z):
    """Principal branch of log Gamma(z)."""
    out = special.loggamma(np.asarray(z, dtype=complex))
    return out[()] if np.ndim(out) == 0 else out


def complex_gamma(z):
    """Gamma(z) for scalar or array complex ``z``; poles raise :class:`PoleArgument`."""
    z = np.asarray(z, dtype=complex)
    pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(pole):
        raise errors.PoleArgument(f"Gamma has a pole at {z[pole].ravel()[0].real:g}")
    out = special.gamma(z)
    return out[()] if out.ndim == 0 else out
