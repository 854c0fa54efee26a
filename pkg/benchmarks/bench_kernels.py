"""Compiled versus numpy kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints the best wall time of each kernel on both worked examples and the
speed-up of the compiled module.  Needs the extension to be built.
"""
import argparse
import time

import numpy as np

from schroeder_tails import _fallback, validate

try:
    from schroeder_tails import _kernels
except ImportError:
    _kernels = None

LAWS = {"ex1": (0.0, 0.1, 0.5, 0.4), "ex2": (0.0, 0.1, 0.1, 0.5, 0.3)}


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(d):
    rng = np.random.default_rng(0)
    z = rng.uniform(0, 30, 20000) * np.exp(1j * rng.uniform(0, np.pi / 2, 20000))
    steps = np.full(z.size, 6, dtype=np.int64)
    u = -z / d.mean ** 6
    return {
        "schroeder_sweep(M=20000)": lambda m: m.schroeder_sweep(d.coeffs, 20000),
        "poincare_recursion(M=256)": lambda m: m.poincare_recursion(d.shifted, d.mean, 256),
        "reduce_iterate(20000 pts)": lambda m: m.reduce_iterate(d.coeffs, d.shifted, u, steps),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled kernels are not built; run pip install -e . first")
    print(f"{'law':4} {'kernel':28} {'numpy [s]':>11} {'compiled [s]':>13} {'speed-up':>9}")
    for name, probs in LAWS.items():
        d = validate(probs)
        for label, call in cases(d).items():
            a = call(_fallback)
            b = call(_kernels)
            assert np.allclose(a, b, rtol=1e-12, atol=1e-300), label
            t_py = best(lambda: call(_fallback), args.repeat)
            t_c = best(lambda: call(_kernels), args.repeat)
            print(f"{name:4} {label:28} {t_py:11.4f} {t_c:13.4f} {t_py / t_c:8.1f}x")


if __name__ == "__main__":
    main()
