#!/usr/bin/env python3
"""Stability overview for the two-velocity relaxation system.

Writes the per-mode spectrum CSV, prints the advised (delta_t, K, Delta_t)
for upwind orders 1-3, and tabulates the smallest stable K for forward-Euler
and RK2 inner integrators across a stiffness sweep.
"""

import argparse
import os

import numpy as np

from kinproj.cli import main as cli_main
from kinproj.model import make_model
from kinproj.space import make_mesh_1d
from kinproj.spectrum import advise_parameters, minimal_stable_K
from kinproj.velocity import gauss_hermite_pair


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dx", type=float, default=0.01)
    ap.add_argument("--eps", type=float, default=1e-8)
    ap.add_argument("--out-dir", default="results/stability")
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)

    csv = os.path.join(args.out_dir, f"spectrum_eps{args.eps:g}.csv")
    cli_main(["spectrum", "--eps", str(args.eps), "--dx", str(args.dx),
              "--order", "1", "--out", csv])
    print(f"wrote {csv}")

    model = make_model("advection1d")
    mesh = make_mesh_1d(0.0, 1.0, int(round(1.0 / args.dx)))
    u0 = np.exp(-100.0 * (mesh.x - 0.5) ** 2)[:, None]
    vset = gauss_hermite_pair(1.0)
    for order in (1, 2, 3):
        s, report = advise_parameters(model, mesh, vset, args.eps, u0,
                                      scheme=f"upwind{order}")
        print(f"upwind{order}: delta_t = {s.delta_t:g}, K = {s.K}, "
              f"Delta_t <= {report['Delta_t_bound']:.3e} "
              f"(fast radius c = {report['fast_radius_c']:.3g})")

    Dt = 0.5 * args.dx
    print(f"\nsmallest stable K at Delta_t = {Dt:g} (first-order upwind):")
    print("eps        inner=fe   inner=rk2")
    for eps in (1e-4, 1e-6, 1e-8):
        kfe = minimal_stable_K(1, args.dx, 1.0, eps, Dt, inner="fe")
        krk = minimal_stable_K(1, args.dx, 1.0, eps, Dt, inner="rk2")
        print(f"{eps:<10g} {kfe!s:<10} {krk}")


if __name__ == "__main__":
    main()
