import numpy as np
import pytest

from schroeder_tails import errors, validate
from schroeder_tails.simulate import gw_population, ks_distance, simulate, thread_count

from conftest import EX1


def test_deterministic():
    d = validate(EX1)
    a = simulate(d, 10, 5000, seed=7)
    b = simulate(d, 10, 5000, seed=7)
    assert np.array_equal(a.w_samples, b.w_samples)
    c = simulate(d, 10, 5000, seed=8)
    assert not np.array_equal(a.w_samples, c.w_samples)


def test_thread_count_does_not_change_samples():
    d = validate(EX1)
    a = simulate(d, 10, 10000, seed=1, threads=1)
    b = simulate(d, 10, 10000, seed=1, threads=4)
    assert np.array_equal(a.w_samples, b.w_samples)


def test_threads_env(monkeypatch):
    monkeypatch.setenv("SCHROEDER_TAILS_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("SCHROEDER_TAILS_THREADS", "x")
    assert thread_count() == 1


def test_single_tree():
    d = validate(EX1)
    rng = np.random.default_rng(0)
    z = gw_population(d, 5, rng)
    assert 1 <= z <= 3 ** 5
    assert gw_population(d, 0, rng) == 1


def test_mean_is_one(ex):
    run = simulate(ex.d, 12, 20000, seed=3)
    s = run.summary()
    assert abs(s["mean"] - 1.0) < 5 * s["stderr"]
    assert s["min"] > 0


def test_overflow_guard():
    with pytest.raises(errors.PopulationOverflow):
        simulate(validate(EX1), 20, 10, seed=0, cap=1000)


def test_input_checks():
    d = validate(EX1)
    with pytest.raises(errors.InvalidInput):
        simulate(d, 5, 0, seed=0)
    with pytest.raises(errors.InvalidInput):
        simulate(d, -1, 5, seed=0)


def test_ks_small_sample(ex):
    run = simulate(ex.d, 14, 20000, seed=5)
    assert ks_distance(run, ex.grid(12)) < 0.02


def test_ks_coverage_guard(ex):
    run = simulate(ex.d, 14, 2000, seed=5)
    narrow = ex.grid(12)
    from schroeder_tails.density import DensityGrid
    sub = DensityGrid(narrow.xs[:10], narrow.ps[:10], "iteration", narrow.params)
    with pytest.raises(errors.GridCoverage):
        ks_distance(run, sub)


def test_histogram_grid(ex):
    run = simulate(ex.d, 12, 5000, seed=2)
    g = run.histogram_grid(50)
    assert g.method == "monte-carlo"
    inner = g.ps[1:-1]
    width = np.diff(g.xs[1:-1]).mean()
    assert inner.sum() * width == pytest.approx(1.0, rel=1e-9)
