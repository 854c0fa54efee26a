import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schroeder_tails import errors
from schroeder_tails.offspring import (compose_coefficients, iterate_pgf, parse_probs,
                                       pgf_eval, validate)

from conftest import EX1, EX2


def test_mean_and_exponent(ex):
    assert ex.d.mean == pytest.approx(ex.ref["mean"], rel=1e-15)
    assert ex.d.tail_exponent == pytest.approx(ex.ref["alpha"], rel=1e-14)


def test_known_exponents():
    assert validate(EX1).tail_exponent == pytest.approx(1.76451, abs=5e-6)
    assert validate(EX2).tail_exponent == pytest.approx(1.09590, abs=5e-6)
    assert validate(EX2).mean == pytest.approx(3.0)


@pytest.mark.parametrize("probs, exc", [
    ((0.2, 0.3, 0.5), errors.NonZeroP0),
    ((0.0, 0.0, 0.5, 0.5), errors.P1OutOfRange),
    ((0.0, 1.0, 0.0), errors.InvalidDistribution),
    ((0.0, 0.1, 0.5, 0.5), errors.NotNormalized),
    ((0.0, 0.1, -0.1, 1.0), errors.NotNormalized),
    ((0.0, 0.5, 0.0, 0.5), errors.PeriodicSupport),
    ((0.0, 0.1), errors.InvalidDistribution),
])
def test_rejections(probs, exc):
    with pytest.raises(exc):
        validate(probs)


def test_errors_are_invalid_input():
    with pytest.raises(errors.InvalidInput):
        validate((0.2, 0.3, 0.5))


def test_near_normalized_is_rescaled():
    d = validate((0.0, 0.1, 0.5, 0.4 + 5e-13))
    assert math.fsum(d.probs) == pytest.approx(1.0, abs=1e-15)


def test_trailing_zeros_dropped():
    assert validate(EX1 + (0.0, 0.0)).degree == 3


def test_parse_probs():
    assert parse_probs("0, 0.1,0.5,0.4") == [0.0, 0.1, 0.5, 0.4]
    with pytest.raises(errors.InvalidInput):
        parse_probs("0,a")


def test_pgf_eval_fixed_points():
    d = validate(EX1)
    assert pgf_eval(d, 1.0) == pytest.approx(1.0)
    assert pgf_eval(d, 0.0) == 0.0
    z = np.array([0.3, 0.5j])
    assert np.allclose(pgf_eval(d, z), [np.polyval(d.probs[::-1], v) for v in z])


def test_shifted_taylor():
    d = validate(EX2)
    # P(1 + u) = sum shifted_k u^k
    u = 0.37
    assert np.polyval(d.shifted[::-1], u) == pytest.approx(pgf_eval(d, 1 + u), rel=1e-14)
    assert d.shifted[1] == pytest.approx(d.mean)


@pytest.mark.parametrize("t", [1, 2, 5, 8])
def test_iterate_small_against_direct(t):
    d = validate(EX1)
    q = np.polynomial.Polynomial(d.probs)
    r = q
    for _ in range(t - 1):
        r = q(r)
    tab = iterate_pgf(d, t)
    assert np.allclose(tab.coeffs, r.coef[: tab.coeffs.size], atol=1e-15)
    assert tab.total() == pytest.approx(1.0, abs=1e-12)


def test_iterate_fft_path_mass_and_head(ex):
    tab = iterate_pgf(ex.d, 10)
    assert tab.total() == pytest.approx(1.0, abs=1e-10)
    assert (tab.coeffs >= 0).all()
    assert tab.coeff(0) == 0.0
    # left coefficient is exactly p1**t
    assert tab.coeff(1) == pytest.approx(ex.d.p1 ** 10, rel=1e-12)
    assert tab.coeff(10 ** 9) == 0.0


def test_cap():
    d = validate(EX2)
    with pytest.raises(errors.CapExceeded):
        iterate_pgf(d, 20)
    with pytest.raises(errors.NumericalGuard):
        iterate_pgf(d, 3, cap=10)
    with pytest.raises(errors.InvalidInput):
        iterate_pgf(d, 0)


def test_table_csv():
    buf = io.StringIO()
    iterate_pgf(validate(EX1), 2).to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "n,p_tn"
    assert lines[2].startswith("1,")


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.0, 1.0), min_size=2, max_size=6),
       st.lists(st.floats(0.0, 1.0), min_size=2, max_size=40))
def test_compose_matches_numpy(outer, inner):
    s = sum(inner) or 1.0
    inner = [v / s for v in inner]
    got, err = compose_coefficients(outer, inner)
    want = np.polynomial.Polynomial(outer)(np.polynomial.Polynomial(inner)).coef
    want = np.pad(want, (0, max(0, got.size - want.size)))
    assert err == 0.0
    assert np.allclose(got, want[: got.size], atol=1e-13)
