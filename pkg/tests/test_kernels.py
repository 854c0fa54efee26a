import os
import subprocess
import sys

import numpy as np
import pytest

from schroeder_tails import _fallback, kernels, validate

from conftest import EX1, EX2

try:
    from schroeder_tails import _kernels
except ImportError:
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled extension not built")


@needs_ext
@pytest.mark.parametrize("probs", [EX1, EX2])
def test_sweep_backends_agree(probs):
    d = validate(probs)
    a = _kernels.schroeder_sweep(d.coeffs, 400)
    b = _fallback.schroeder_sweep(d.coeffs, 400)
    assert np.allclose(a, b, rtol=1e-12, atol=0)


@needs_ext
@pytest.mark.parametrize("probs", [EX1, EX2])
def test_poincare_backends_agree(probs):
    d = validate(probs)
    a = _kernels.poincare_recursion(d.shifted, d.mean, 64)
    b = _fallback.poincare_recursion(d.shifted, d.mean, 64)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-300)


@needs_ext
def test_reduce_backends_agree():
    d = validate(EX2)
    rng = np.random.default_rng(3)
    # starting offsets as pi_eval produces them: -z E**-k for |z| up to 30
    z = rng.uniform(0, 30, 50) * np.exp(1j * rng.uniform(0, np.pi / 2, 50))
    steps = rng.integers(3, 12, size=50)
    u = -z / d.mean ** steps
    a = _kernels.reduce_iterate(d.coeffs, d.shifted, u, steps)
    b = _fallback.reduce_iterate(d.coeffs, d.shifted, u, steps)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-15)


def test_reduce_zero_steps_is_identity_shift():
    d = validate(EX1)
    u = np.array([0.1 + 0.2j, -0.7])
    for mod in (_fallback, kernels):
        out = mod.reduce_iterate(d.coeffs, d.shifted, u, np.zeros(2, dtype=np.int64))
        assert np.allclose(out, 1 + u)


def test_sweep_starts_with_identity():
    phi = kernels.schroeder_sweep(validate(EX1).coeffs, 4)
    assert phi[0] == 0.0 and phi[1] == 1.0


def test_backend_flag():
    assert kernels.BACKEND in ("compiled", "python")


def test_pure_python_switch():
    env = dict(os.environ, SCHROEDER_TAILS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import schroeder_tails as s; print(s.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
