"""Left-tail asymptotics of the Galton-Watson martingale limit in the Schroeder case."""
from .errors import InvalidInput, NumericalGuard, SchroederTailsError
from .kernels import BACKEND
from .offspring import OffspringDistribution, iterate_pgf, pgf_eval, validate
from .poincare import PoincareEvaluator, pi_eval, pi_via_limit, poincare_coeffs
from .schroeder import SchroederSeries, phi_eval, phi_via_limit, schroeder_coeffs, schroeder_series
from .spectral import (KarlinMcGregorSpectrum, PeriodicMultiplier, build_multiplier,
                       fourier_coeffs, k0_eval, kstar_eval, v_eval)

__version__ = "0.1.0"
