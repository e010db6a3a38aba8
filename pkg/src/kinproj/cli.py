"""Command-line front end.

Subcommands mirror the experiment taxonomy:

* ``run``          integrate a configured problem, write snapshot CSVs + manifest
* ``convergence``  spatial or temporal order sweep, CSV table + JSON summary
* ``spectrum``     eigenvalues/amplification factors per Fourier mode, CSV
* ``params``       print the advised (delta_t, K, Delta_t) report
* ``reference``    build (or reuse) a fine-grid reference solution

Exit codes: 0 ok, 2 config error, 3 instability, 4 non-physical state.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import harness, spectrum as spec_mod
from .config import (
    apply_env_overrides,
    make_config,
    parse_config,
    resolve_config,
    serialize_config,
)
from .errors import ConfigError, KinprojError, NonFiniteError, NonPhysicalState
from .model import Euler1D, Euler2D, ShallowWater2D
from .problems import builtin_problem, fine_grid_reference
from .solver import RunResult, solve
from .timeint import OUTER_TABLEAUX, ProjectiveScheme
from .velocity import gauss_hermite_pair

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNSTABLE = 3
EXIT_NONPHYSICAL = 4


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _derived_columns(model, u):
    """Pressure and bulk velocity columns for models with an equation of state."""
    cols = []
    if isinstance(model, Euler1D):
        cols.append(("p", model.pressure(u)))
        cols.append(("vbar", u[..., 1] / u[..., 0]))
    elif isinstance(model, (ShallowWater2D, Euler2D)):
        cols.append(("p", model.pressure(u)))
        cols.append(("vx", u[..., 1] / u[..., 0]))
        cols.append(("vy", u[..., 2] / u[..., 0]))
    return cols


_COMPONENT_NAMES = {
    "advection1d": ("u",),
    "burgers1d": ("u",),
    "euler1d": ("rho", "mom", "E"),
    "advection2d": ("u",),
    "shallow_water2d": ("h", "hvx", "hvy"),
    "euler2d": ("rho", "momx", "momy", "E"),
}


def write_snapshot_csv(path: str, result: RunResult, u: np.ndarray):
    model = result.problem.model
    mesh = result.mesh
    names = _COMPONENT_NAMES[model.name]
    derived = _derived_columns(model, u)
    with open(path, "w") as fh:
        if mesh.D == 1:
            fh.write(",".join(["x", *names, *(n for n, _ in derived)]) + "\n")
            for i, xi in enumerate(mesh.x):
                vals = [xi, *(u[i, m] for m in range(u.shape[-1]))]
                vals += [col[i] for _, col in derived]
                fh.write(",".join(_fmt(v) for v in vals) + "\n")
        else:
            fh.write(",".join(["x", "y", *names, *(n for n, _ in derived)]) + "\n")
            xs, ys = mesh.x, mesh.y
            for iy, yv in enumerate(ys):
                for ix, xv in enumerate(xs):
                    vals = [xv, yv, *(u[iy, ix, m] for m in range(u.shape[-1]))]
                    vals += [col[iy, ix] for _, col in derived]
                    fh.write(",".join(_fmt(v) for v in vals) + "\n")


def _manifest(result: RunResult, files: dict) -> dict:
    text = serialize_config(result.config)
    drift = result.conservation_drift
    out = {
        "config": text,
        "config_hash": hashlib.sha256(text.encode()).hexdigest(),
        "problem": result.problem.name,
        "T": result.t,
        "outer_steps": result.outer_steps,
        "rhs_evaluations": result.rhs_evals,
        "wall_time_s": result.wall_time,
        "totals_initial": [float(v) for v in result.totals_initial],
        "totals_final": [float(v) for v in result.totals_final],
        "conservation_drift_rel": [float(v) for v in drift],
        "subcharacteristic_events": [
            {"step": s, "old_speed": o, "new_speed": nw, "rescaled": r}
            for s, o, nw, r in result.rescale_events
        ],
        "files": files,
    }
    if result.ledger is not None:
        out["boundary_flux_ledger"] = [float(v) for v in result.ledger]
        out["ledger_residual"] = [float(v) for v in result.ledger_residual]
    return out


def cmd_run(args) -> int:
    with open(args.config) as fh:
        cfg = parse_config(fh.read())
    apply_env_overrides(cfg, os.environ)
    if args.out_dir:
        cfg.output.dir = args.out_dir
    cfg = resolve_config(cfg)
    result = solve(cfg)

    out_dir = cfg.output.dir
    os.makedirs(out_dir, exist_ok=True)
    prefix = cfg.output.prefix or cfg.problem.name
    files = {}
    snaps = dict(result.snapshots)
    snaps.setdefault(result.t, result.u)
    for idx, (t, u) in enumerate(sorted(snaps.items())):
        path = os.path.join(out_dir, f"{prefix}_snap{idx:02d}.csv")
        write_snapshot_csv(path, result, u)
        files[f"{t:.12g}"] = os.path.basename(path)
    manifest_path = os.path.join(out_dir, f"{prefix}_manifest.json")
    with open(manifest_path, "w") as fh:
        json.dump(_manifest(result, files), fh, indent=1, sort_keys=True)
    print(f"wrote {len(files)} snapshot(s) and {manifest_path}")
    return EXIT_OK


def cmd_convergence(args) -> int:
    orders = [int(s) for s in args.orders.split(",")]
    reports = []
    for p in orders:
        if args.sweep == "space":
            scheme = f"{args.family}{p}"
            dx_list = [d for d in harness.DX_SWEEP if d >= args.min_dx]
            rep = harness.spatial_order_sweep(
                args.problem, args.outer, scheme, dx_list,
                harness.paper_coupling(args.outer, p),
                eps=args.eps, K=args.K, T=args.T, ic=args.ic,
            )
        else:
            dt_list = [d for d in harness.DT_SWEEP if d >= args.min_dt]
            if args.reference == "expm":
                reference = "expm"
            else:
                data = np.loadtxt(args.reference, delimiter=",", skiprows=1)
                reference = data[:, 1:]
            rep = harness.temporal_order_sweep(
                args.problem, args.outer, dt_list, I=args.I, scheme=args.scheme,
                eps=args.eps, K=args.K, T=args.T, ic=args.ic, reference=reference,
            )
        reports.append(rep)
        print(f"{rep.label}: slope = {rep.slope:.3f}"
              + (" (insufficient points)" if rep.insufficient_points else ""))
        if args.out:
            base = f"{args.out}_{args.sweep}_{args.outer}_p{p}"
            harness.write_report_csv(rep, base + ".csv",
                                     x_name="dx" if args.sweep == "space" else "Dt")
    if args.out:
        summary = [harness.report_summary(r) for r in reports]
        with open(f"{args.out}_{args.sweep}_{args.outer}_summary.json", "w") as fh:
            json.dump(summary, fh, indent=1, sort_keys=True)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    I = int(round(1.0 / args.dx))
    zetas = spec_mod.zeta_modes(I)
    scheme = ProjectiveScheme(
        inner="fe", eps=args.eps, delta_t=args.eps, K=args.K,
        Delta_t=args.Dt if args.Dt else args.dx / args.vstar,
        tableau=OUTER_TABLEAUX["pfe"],
    )
    rows = []
    for zeta in zetas:
        coeff = spec_mod.symbol_coefficients(args.order, float(zeta), args.vstar, args.dx)
        lam1, lam2 = spec_mod.exact_eigenvalues_from_symbol(
            coeff.alpha, coeff.beta, args.vstar, args.eps)
        as1, as2 = spec_mod.asymptotic_eigenvalues(coeff.alpha, coeff.beta, args.vstar, args.eps)
        tau1 = spec_mod.amplification(lam1, "fe", scheme.delta_t)
        tau2 = spec_mod.amplification(lam2, "fe", scheme.delta_t)
        rows.append((
            zeta, lam1.real, lam1.imag, lam2.real, lam2.imag,
            as1.real, as1.imag, as2.real, as2.imag,
            tau1.real, tau1.imag, tau2.real, tau2.imag,
            int(spec_mod.pfe_stable(tau1, scheme.K, scheme.delta_t, scheme.Delta_t)),
            int(spec_mod.pfe_stable(tau2, scheme.K, scheme.delta_t, scheme.Delta_t)),
        ))
    header = ("zeta,lam1_re,lam1_im,lam2_re,lam2_im,"
              "lam1_asym_re,lam1_asym_im,lam2_asym_re,lam2_asym_im,"
              "tau1_re,tau1_im,tau2_re,tau2_im,stable_slow,stable_fast")
    dest = open(args.out, "w") if args.out else sys.stdout
    try:
        dest.write(header + "\n")
        for row in rows:
            dest.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    finally:
        if args.out:
            dest.close()
    return EXIT_OK


def cmd_params(args) -> int:
    problem = builtin_problem(args.problem)
    model = problem.model
    mesh = problem.mesh(args.I or problem.defaults["I"],
                        problem.defaults.get("I_y"))
    u0 = problem.initial_field(mesh)
    if model.D == 1:
        sigma = args.sigma or float(model.max_wave_speed(u0)[0])
        vset = gauss_hermite_pair(sigma)
    else:
        print("parameter advice is exact only for the 1D two-velocity setting",
              file=sys.stderr)
        return EXIT_CONFIG
    suggestion, report = spec_mod.advise_parameters(
        model, mesh, vset, args.eps, u0, outer=args.outer, inner=args.inner,
        scheme=args.scheme,
    )
    report = dict(report)
    report["suggested"] = {
        "delta_t": suggestion.delta_t,
        "K": suggestion.K,
        "Delta_t": suggestion.Delta_t,
    }
    json.dump(report, sys.stdout, indent=1, sort_keys=True)
    print()
    return EXIT_OK


def cmd_reference(args) -> int:
    spec = dict(I=args.I, scheme=args.scheme, outer=args.outer, eps=args.eps,
                K=args.K, T=args.T, Dt=args.Dt, ic=args.ic)
    u, meta = fine_grid_reference(args.problem, spec, out_dir=args.out)
    print(json.dumps(meta, indent=1, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kinproj",
                                 description="projective-integration relaxation solver")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="integrate a configured problem")
    p.add_argument("--config", required=True, help="TOML run config")
    p.add_argument("--out-dir", help="override output.dir")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("convergence", help="order-of-accuracy sweeps")
    p.add_argument("--sweep", choices=("space", "time"), required=True)
    p.add_argument("--problem", default="advection1d")
    p.add_argument("--outer", choices=("pfe", "prk2", "prk4"), default="pfe")
    p.add_argument("--orders", default="1,2,3", help="comma list of spatial orders")
    p.add_argument("--family", choices=("upwind", "eno"), default="upwind")
    p.add_argument("--scheme", default="upwind3", help="fixed scheme for time sweeps")
    p.add_argument("--I", type=int, default=100, help="cells for time sweeps")
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--K", type=int, default=2)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--ic", default="gauss")
    p.add_argument("--min-dx", type=float, default=0.0005)
    p.add_argument("--min-dt", type=float, default=0.0001)
    p.add_argument("--reference", default="expm",
                   help="'expm' (linear problems) or path to a stored reference CSV")
    p.add_argument("--out", help="output file prefix")
    p.set_defaults(func=_cmd_convergence_default_T)

    p = sub.add_parser("spectrum", help="per-mode eigenvalues and stability")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--dx", type=float, required=True)
    p.add_argument("--order", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--vstar", type=float, default=1.0)
    p.add_argument("--K", type=int, default=2)
    p.add_argument("--Dt", type=float, default=None)
    p.add_argument("--out", help="CSV destination (stdout if omitted)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("params", help="advised projective parameters")
    p.add_argument("--problem", default="advection1d")
    p.add_argument("--scheme", default="upwind1")
    p.add_argument("--outer", choices=("pfe", "prk2", "prk4"), default="pfe")
    p.add_argument("--inner", choices=("fe", "rk2"), default="fe")
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--I", type=int, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("reference", help="build or reuse a fine-grid reference")
    p.add_argument("--problem", default="burgers1d")
    p.add_argument("--ic", default="gauss")
    p.add_argument("--I", type=int, default=200)
    p.add_argument("--scheme", default="upwind3")
    p.add_argument("--outer", default="prk4")
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--K", type=int, default=2)
    p.add_argument("--T", type=float, default=0.04)
    p.add_argument("--Dt", type=float, default=1e-6)
    p.add_argument("--out", default="references")
    p.set_defaults(func=cmd_reference)
    return ap


def _cmd_convergence_default_T(args) -> int:
    if args.T is None:
        args.T = 0.02 if args.sweep == "space" else 0.04
    return cmd_convergence(args)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonFiniteError as exc:
        print(f"instability [{exc.__class__.__module__}]: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except NonPhysicalState as exc:
        print(f"non-physical state [{exc.__class__.__module__}]: {exc}", file=sys.stderr)
        return EXIT_NONPHYSICAL
    except KinprojError as exc:
        print(f"error [{exc.__class__.__name__}]: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
