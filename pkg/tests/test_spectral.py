import math

import mpmath as mp
import numpy as np
import pytest

from schroeder_tails import errors
from schroeder_tails.spectral import (build_multiplier, fourier_coeffs, k0_eval, k0_terms,
                                      karlin_mcgregor_spectrum, kstar_eval, v_eval)


def test_kstar_matches_oracle(ex):
    for z, want in ex.ref["kstar"]:
        assert kstar_eval(ex.phi, ex.pi, ex.d, z) == pytest.approx(want, rel=1e-12)


def test_kstar_shift_and_period(ex):
    z = np.linspace(-2.0, 3.0, 41)
    base = kstar_eval(ex.phi, ex.pi, ex.d, z)
    assert np.allclose(kstar_eval(ex.phi, ex.pi, ex.d, z, extra_shift=2), base, rtol=1e-12)
    assert np.allclose(kstar_eval(ex.phi, ex.pi, ex.d, z + 1.0), base, rtol=1e-12)


def test_theta_matches_oracle(ex):
    spec = ex.pm.spectrum
    theta0 = abs(spec.coefficient(0))
    for m, (re, im) in ex.ref["theta"].items():
        got = spec.coefficient(int(m))
        assert abs(got - complex(re, im)) < 1e-13 * theta0


def test_retained_band(ex):
    spec = ex.pm.spectrum
    want = {"ex1": 2, "ex2": 3}[ex.name]
    assert spec.m_max == want
    assert spec.theta.size == 2 * want + 1


def test_high_band_is_noise(ex):
    # everything beyond a quarter of the grid sits at rounding level
    spec = ex.pm.spectrum
    g = spec.grid_size
    ms = np.arange(-g // 2, g // 2)
    far = np.abs(spec.raw[np.abs(ms) > g // 4])
    assert far.max() < 1e-10 * abs(spec.coefficient(0))


def test_aliasing_guard_on_coarse_grid():
    from conftest import bundle
    b = bundle("ex2")
    with pytest.raises(errors.AliasingSuspected):
        karlin_mcgregor_spectrum(b.d, 4, b.phi, b.pi)


@pytest.mark.parametrize("g", [3, 6, 2])
def test_grid_validation(g):
    with pytest.raises(errors.InvalidInput):
        fourier_coeffs(np.ones(g))


def test_fourier_coeffs_of_trig_polynomial():
    z = np.arange(64) / 64
    f = 2.0 + 0.5 * np.cos(2 * np.pi * z) + 1e-3 * np.sin(4 * np.pi * z)
    spec = fourier_coeffs(f)
    assert spec.m_max == 2
    assert spec.coefficient(1) == pytest.approx(0.25)
    assert spec.coefficient(-2) == pytest.approx(0.5e-3j)
    assert spec.coefficient(7) == 0j
    assert spec(0.3) == pytest.approx(2.0 + 0.5 * math.cos(0.6 * math.pi) + 1e-3 * math.sin(1.2 * math.pi))


def test_weights_conjugate_pairs(ex):
    w = ex.pm.weights
    assert np.allclose(w, np.conj(w[::-1]), rtol=0, atol=0)


def _oracle_v(ref, d, x, m_max):
    ln_e, ln_p1 = mp.log(d.mean), mp.log(d.p1)
    z = -mp.log(x) / ln_e
    total = 0
    for m, (re, im) in ref["theta"].items():
        m = int(m)
        if abs(m) <= m_max:
            g = mp.gamma(-(2j * mp.pi * m + ln_p1) / ln_e)
            total += mp.mpc(re, im) * mp.expjpi(2 * m * z) / g
    return float(total.real)


def test_v_matches_oracle_same_band(ex):
    spec = ex.pm.spectrum
    # theta_m carries an absolute FFT floor near 1e-15 |theta_0|, which 1/Gamma amplifies
    inv_gamma = np.abs(ex.pm.weights / spec.theta)
    tol = 1e-15 * abs(spec.coefficient(0)) * inv_gamma.sum()
    for x, _ in ex.ref["v"]:
        assert abs(v_eval(ex.pm, x) - _oracle_v(ex.ref, ex.d, x, spec.m_max)) < tol


def test_v_band_truncation_error(ex):
    # the band is limited by the double-precision floor on theta_m
    bound = {"ex1": 5e-4, "ex2": 5e-3}[ex.name]
    for x, want in ex.ref["v"]:
        assert v_eval(ex.pm, x) == pytest.approx(want, rel=bound)


def test_k0_terms_decay(ex):
    t = np.abs(k0_terms(ex.pm, 0.0))
    mid = t.size // 2
    assert t[mid] == t.max()


def test_residue_guard(ex):
    with pytest.raises(errors.ImagResidueTooLarge):
        k0_eval(ex.pm, 0.3, residue_tol=-1.0)


def test_v_domain(ex):
    with pytest.raises(errors.NonPositiveX):
        v_eval(ex.pm, 0.0)
    with pytest.raises(errors.NonPositiveX):
        v_eval(ex.pm, np.array([1.0, -2.0]))


def test_decay_rate_positive(ex):
    assert ex.pm.spectrum.decay_rate > 0


def test_grid_refinement_stable(ex):
    a = ex.pm.spectrum
    b = build_multiplier(ex.d, 2048, ex.phi, ex.pi).spectrum
    assert a.m_max == b.m_max
    assert np.allclose(a.theta, b.theta, atol=1e-14)
