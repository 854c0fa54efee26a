import json
import pathlib

import pytest

from schroeder_tails import build_multiplier, poincare_coeffs, schroeder_series, validate
from schroeder_tails.density import density_by_iteration

EX1 = (0.0, 0.1, 0.5, 0.4)
EX2 = (0.0, 0.1, 0.1, 0.5, 0.3)
EXAMPLES = {"ex1": EX1, "ex2": EX2}

_ORACLES = json.loads((pathlib.Path(__file__).parent / "data" / "oracles.json").read_text())


@pytest.fixture(scope="session")
def oracles():
    return _ORACLES


class Bundle:
    """Lazily built objects for one example, shared across the session."""

    def __init__(self, name):
        self.name = name
        self.d = validate(EXAMPLES[name])
        self.ref = _ORACLES[name]
        self._cache = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def phi(self):
        return self._get("phi", lambda: schroeder_series(self.d))

    @property
    def pi(self):
        return self._get("pi", lambda: poincare_coeffs(self.d))

    @property
    def pm(self):
        return self._get("pm", lambda: build_multiplier(self.d, phi=self.phi, pi=self.pi))

    def grid(self, t=12, cap=None):
        kw = {} if cap is None else {"cap": cap}
        return self._get(("grid", t, cap), lambda: density_by_iteration(self.d, t, **kw))


_BUNDLES = {}


@pytest.fixture(scope="session", params=["ex1", "ex2"])
def ex(request):
    if request.param not in _BUNDLES:
        _BUNDLES[request.param] = Bundle(request.param)
    return _BUNDLES[request.param]


def bundle(name):
    if name not in _BUNDLES:
        _BUNDLES[name] = Bundle(name)
    return _BUNDLES[name]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        title, ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
