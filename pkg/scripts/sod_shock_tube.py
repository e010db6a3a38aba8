#!/usr/bin/env python3
"""Sod's shock test: PRK4 + third-order ENO on the kinetic relaxation system.

Writes the numerical and exact solutions (density, velocity, energy,
pressure) at t = 0.22 side by side.
"""

import argparse
import os

import numpy as np

from kinproj.config import make_config
from kinproj.problems import builtin_problem, exact_sod
from kinproj.solver import solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--I", type=int, default=200)
    ap.add_argument("--out", default="results/sod_t022.csv")
    args = ap.parse_args()

    cfg = make_config("sod1d", I=args.I)
    res = solve(cfg)
    problem = builtin_problem("sod1d")
    model = problem.model
    ref = exact_sod(problem, res.mesh.x, res.t)

    err = float(np.sum(np.abs(res.u[:, 0] - ref[:, 0])) * res.mesh.dx)
    print(f"I={args.I}: L1 density error vs exact Riemann solution = {err:.5f}")

    os.makedirs(os.path.dirname(args.out), exist_ok=True)
    with open(args.out, "w") as fh:
        fh.write("x,rho,vbar,E,p,rho_exact,vbar_exact,E_exact,p_exact\n")
        p_num = model.pressure(res.u)
        p_ref = model.pressure(ref)
        for i, x in enumerate(res.mesh.x):
            row = (x, res.u[i, 0], res.u[i, 1] / res.u[i, 0], res.u[i, 2], p_num[i],
                   ref[i, 0], ref[i, 1] / ref[i, 0], ref[i, 2], p_ref[i])
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
