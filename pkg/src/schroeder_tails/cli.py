"""``schroeder-tails`` command line.

Every numeric subcommand writes CSV (stdout or ``--out``) and a JSON
sidecar with the resolved config, versions, tolerances and timing.
Exit status: 0 ok, 2 invalid input, 3 numerical guard, 4 I/O error.
"""
import argparse
import csv
import io
import json
import math
import platform
import sys
import time

import numpy as np
import scipy

from . import __version__, config, errors, kernels
from . import density as dens
from . import offspring, poincare, schroeder, simulate as sim, spectral

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_IO = 0, 2, 3, 4

PLOT_TEMPLATE = '''\
"""Log-log plot of exact versus asymptotic density; needs matplotlib."""
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv_path!r}
with open(path) as fh:
    rows = list(csv.DictReader(fh))
x = [float(r["x"]) for r in rows]
fig, ax = plt.subplots()
for key, style in (("p_iter", "-"), ("p_fourier", ":"), ("p_asym", "--")):
    ax.loglog(x, [float(r[key]) for r in rows], style, label=key)
ax.set_xlabel("x")
ax.set_ylabel("p(x)")
ax.set_title({title!r})
ax.legend()
fig.savefig({png_path!r}, dpi=150)
'''


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from exc


def _probs(text):
    try:
        return offspring.parse_probs(text)
    except errors.InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser():
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--probs", type=_probs, help="offspring law p0,p1,...,pN")
    common.add_argument("--config", dest="config_path", help="flat TOML config file")
    common.add_argument("--out", help="CSV path (default stdout); sidecar goes to OUT.meta.json")
    common.add_argument("--meta", help="explicit path for the JSON sidecar")

    ap = argparse.ArgumentParser(prog="schroeder-tails", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_,
                              argument_default=argparse.SUPPRESS)

    add("validate", "check an offspring law; print mean and tail exponent")

    p = add("phi", "Schroeder series coefficients")
    p.add_argument("--order", dest="m_phi", type=int)

    p = add("pi", "Poincare function on a grid")
    p.add_argument("--grid", dest="pi_grid", action="append",
                   help="AXIS:START:STOP:NUM with AXIS re or im; repeatable")
    p.add_argument("--order", dest="m_pi", type=int)

    p = add("theta", "Fourier coefficients of the Karlin-McGregor function")
    p.add_argument("--grid", type=int)
    p.add_argument("--all", dest="show_all", action="store_true",
                   help="print the whole DFT instead of the retained band")

    p = add("k0", "periodic multiplier K0 on [0, 1]")
    p.add_argument("--samples", type=int)
    p.add_argument("--grid", type=int)

    p = add("v", "left-tail multiplier V(x)")
    p.add_argument("--x", type=_floats)
    p.add_argument("--grid", type=int)

    p = add("density", "exact density of W")
    p.add_argument("--method", choices=("iteration", "fourier"))
    p.add_argument("--t", dest="t_iter", type=int)
    p.add_argument("--xmin", type=float)
    p.add_argument("--xmax", type=float)
    p.add_argument("--points", type=int, help="Fourier route only")
    p.add_argument("--cap", type=int)

    p = add("compare", "exact versus asymptotic density on a log grid")
    p.add_argument("--t", dest="t_iter", type=int)
    p.add_argument("--xmin", type=float)
    p.add_argument("--xmax", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--grid", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--no-fourier", dest="fourier", action="store_false")
    p.add_argument("--emit-plot", dest="emit_plot", action="store_true")

    p = add("simulate", "Monte Carlo samples of E**-t Z_t")
    p.add_argument("--t", dest="t_sim", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--summary", action="store_true")
    return ap


def resolve_config(ns):
    opts = dict(vars(ns))
    command = opts.pop("command")
    path = opts.pop("config_path", None)
    cfg = config.load(path) if path else config.RunConfig()
    cfg = cfg.updated(**opts)
    if cfg.probs is None:
        raise errors.InvalidInput("no offspring law: pass --probs or a config with probs")
    return command, cfg


def _r(v):
    return repr(float(v))


def _pi_points(specs):
    zs = []
    for spec in specs:
        parts = spec.split(":")
        if len(parts) != 4 or parts[0] not in ("re", "im"):
            raise errors.InvalidInput(f"bad grid spec {spec!r}, expected AXIS:START:STOP:NUM")
        try:
            a, b, n = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as exc:
            raise errors.InvalidInput(f"bad grid spec {spec!r}") from exc
        if n < 1:
            raise errors.EmptyRange(f"grid spec {spec!r} has no points")
        line = np.linspace(a, b, n)
        zs.append(line.astype(complex) if parts[0] == "re" else 1j * line)
    return np.concatenate(zs)


# -- subcommands: each returns (header, rows) and fills in info ----------

def cmd_validate(d, cfg, info):
    info["tolerances"] = {"sum_tol": offspring.SUM_TOL}
    rows = [("mean", _r(d.mean)), ("tail_exponent", _r(d.tail_exponent)),
            ("p1", _r(d.p1)), ("degree", d.degree)]
    return ["quantity", "value"], rows


def _phi(d, cfg, info):
    if cfg.m_phi is None:
        s = schroeder.schroeder_series(d)
    else:
        s = schroeder.schroeder_coeffs(d, cfg.m_phi)
    info["tolerances"].update(phi_tail_tol=schroeder.TAIL_TOL, phi_radius=s.radius,
                              phi_max_order=schroeder.MAX_ORDER)
    info["diagnostics"].update(phi_order=s.order,
                               phi_tail_bound=s.phi.remainder_bound(s.radius))
    return s


def _pi(d, cfg, info):
    ev = poincare.poincare_coeffs(d, cfg.m_pi)
    info["tolerances"].update(pi_tail_tol=poincare.TAIL_TOL,
                              pi_cancellation=poincare.CANCELLATION)
    info["diagnostics"].update(pi_order=cfg.m_pi, pi_trusted_radius=ev.trusted_radius)
    return ev


def _multiplier(d, cfg, info, pi=None):
    phi = _phi(d, cfg, info)
    pi = pi if pi is not None else _pi(d, cfg, info)
    spec = spectral.karlin_mcgregor_spectrum(d, cfg.grid, phi, pi)
    info["tolerances"].update(truncation_tol=spectral.TRUNCATION_TOL,
                              alias_tol=spectral.ALIAS_TOL,
                              residue_tol=spectral.RESIDUE_TOL,
                              shift_threshold=spectral.SHIFT_THRESHOLD)
    nyq = abs(spec.raw_coefficient(-cfg.grid // 2)) / abs(spec.coefficient(0))
    info["diagnostics"].update(grid=cfg.grid, m_max=spec.m_max,
                               nyquist_ratio=nyq, decay_rate=spec.decay_rate)
    return spec, spectral.periodic_multiplier(spec, d)


def cmd_phi(d, cfg, info):
    s = _phi(d, cfg, info)
    return ["n", "phi_n"], [(n, _r(c)) for n, c in enumerate(s.phi.coeffs)]


def cmd_pi(d, cfg, info):
    ev = _pi(d, cfg, info)
    z = _pi_points(cfg.pi_grid)
    v = np.asarray(poincare.pi_eval(ev, z), dtype=complex)
    return (["z_re", "z_im", "pi_re", "pi_im"],
            [(_r(a.real), _r(a.imag), _r(b.real), _r(b.imag)) for a, b in zip(z, v)])


def cmd_theta(d, cfg, info):
    spec, _ = _multiplier(d, cfg, info)
    if cfg.show_all:
        ms = np.arange(-cfg.grid // 2, cfg.grid // 2)
        vals = [spec.raw_coefficient(m) for m in ms]
    else:
        ms = spec.ms
        vals = [spec.coefficient(m) for m in ms]
    return ["m", "theta_re", "theta_im"], [(int(m), _r(v.real), _r(v.imag)) for m, v in zip(ms, vals)]


def cmd_k0(d, cfg, info):
    if cfg.samples < 2:
        raise errors.InvalidInput("samples must be >= 2")
    _, pm = _multiplier(d, cfg, info)
    z = np.linspace(0.0, 1.0, cfg.samples)
    k = spectral.k0_eval(pm, z)
    info["diagnostics"]["endpoint_gap"] = abs(float(k[-1] - k[0]))
    return ["z", "k0"], [(_r(a), _r(b)) for a, b in zip(z, k)]


def cmd_v(d, cfg, info):
    if not cfg.x:
        raise errors.EmptyRange("no x values given (--x)")
    _, pm = _multiplier(d, cfg, info)
    x = np.asarray(cfg.x, dtype=float)
    v = np.atleast_1d(spectral.v_eval(pm, x))
    return ["x", "v"], [(_r(a), _r(b)) for a, b in zip(x, v)]


def cmd_density(d, cfg, info):
    if cfg.method == "iteration":
        grid = dens.density_by_iteration(d, cfg.t_iter, (cfg.xmin, cfg.xmax), cap=cfg.cap)
        info["tolerances"].update(cap=cfg.cap, head_order=offspring.HEAD_ORDER)
        info["diagnostics"].update(binning=grid.params["binning"],
                                   binning_error=d.mean ** (-cfg.t_iter))
    else:
        if cfg.points < 1 or not cfg.xmin < cfg.xmax:
            raise errors.EmptyRange(f"empty x range [{cfg.xmin}, {cfg.xmax}]")
        ev = _pi(d, cfg, info)
        quad = dens.FourierQuadrature()
        grid = dens.fourier_density(ev, np.geomspace(cfg.xmin, cfg.xmax, cfg.points), quad)
        info["tolerances"].update(fourier_tail_tol=quad.tail_tol, y_max=quad.y_max,
                                  negative_tol=dens.NEGATIVE_TOL)
        info["diagnostics"].update(step=grid.params["step"], y_cut=grid.params["y_cut"],
                                   clamped=grid.clamped)
    return ["x", "p"], [(_r(a), _r(b)) for a, b in zip(grid.xs, grid.ps)]


def cmd_compare(d, cfg, info):
    if cfg.emit_plot and cfg.out == "-":
        raise errors.InvalidInput("--emit-plot needs --out so the script has a CSV to read")
    ev = _pi(d, cfg, info)
    _, pm = _multiplier(d, cfg, info, pi=ev)
    quad = dens.FourierQuadrature()
    table = dens.compare(d, cfg.t_iter, (cfg.xmin, cfg.xmax), cfg.points, pm=pm, pi=ev,
                         fourier=cfg.fourier, quad=quad)
    info["tolerances"].update(cap=cfg.cap, resolution_cells=dens.RESOLUTION_CELLS,
                              fourier_tail_tol=quad.tail_tol, negative_tol=dens.NEGATIVE_TOL)
    info["diagnostics"].update(binning="integer part of x*E**t",
                               binning_error=d.mean ** (-cfg.t_iter),
                               alpha=d.tail_exponent)
    rows = [tuple(_r(v) for v in r) for r in
            zip(table.xs, table.p_iter, table.p_fourier, table.p_asym, table.ratio)]
    return ["x", "p_iter", "p_fourier", "p_asym", "ratio"], rows


def cmd_simulate(d, cfg, info):
    run = sim.simulate(d, cfg.t_sim, cfg.n, cfg.seed)
    info["tolerances"].update(population_cap=sim.POPULATION_CAP, block=sim.BLOCK,
                              threads=sim.thread_count())
    if cfg.summary:
        s = run.summary()
        return ["stat", "value"], [(k, _r(v) if isinstance(v, float) else v) for k, v in s.items()]
    return ["w"], [(_r(w),) for w in run.w_samples]


COMMANDS = {"validate": cmd_validate, "phi": cmd_phi, "pi": cmd_pi, "theta": cmd_theta,
            "k0": cmd_k0, "v": cmd_v, "density": cmd_density, "compare": cmd_compare,
            "simulate": cmd_simulate}


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    return obj


def _write_outputs(command, cfg, header, rows, info):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    text = buf.getvalue()
    if cfg.out == "-":
        sys.stdout.write(text)
        meta_path = cfg.meta
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        meta_path = cfg.meta or cfg.out + ".meta.json"
    if command == "compare" and cfg.emit_plot:
        stem = cfg.out[:-4] if cfg.out.endswith(".csv") else cfg.out
        script = stem + "_plot.py"
        title = "probs = " + ", ".join(f"{p:g}" for p in cfg.probs)
        with open(script, "w", encoding="utf-8") as fh:
            fh.write(PLOT_TEMPLATE.format(csv_path=cfg.out, png_path=stem + ".png", title=title))
        info["plot_script"] = script
    if meta_path:
        with open(meta_path, "w", encoding="utf-8") as fh:
            json.dump(_json_safe(info), fh, indent=2, sort_keys=True)
            fh.write("\n")


def run(command, cfg):
    """Execute one subcommand; returns the exit status."""
    info = {"command": command, "config": cfg.to_dict(), "version": __version__,
            "python": platform.python_version(), "numpy": np.__version__,
            "scipy": scipy.__version__, "kernel_backend": kernels.BACKEND,
            "tolerances": {}, "diagnostics": {}}
    start = time.perf_counter()
    try:
        d = offspring.validate(cfg.probs)
        info["distribution"] = {"probs": list(d.probs), "mean": d.mean,
                                "tail_exponent": d.tail_exponent}
        header, rows = COMMANDS[command](d, cfg, info)
        info["timing_s"] = time.perf_counter() - start
        _write_outputs(command, cfg, header, rows, info)
    except errors.InvalidInput as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except errors.NumericalGuard as exc:
        print(f"numerical guard: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None):
    ns = build_parser().parse_args(argv)
    try:
        command, cfg = resolve_config(ns)
    except errors.InvalidInput as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TypeError as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(command, cfg)


if __name__ == "__main__":
    sys.exit(main())
