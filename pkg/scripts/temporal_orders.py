#!/usr/bin/env python3
"""Temporal order study: fixed grid, swept outer step, for advection and Burgers.

The advection errors are measured against the exact (matrix-exponential)
solution of the semi-discrete system; Burgers against a stored fine-grid
reference (built on demand). Both eps = 1e-5 and 1e-8 are run to show the
O(eps) error floor.
"""

import argparse
import os

from kinproj.harness import DT_SWEEP, temporal_order_sweep, write_report_csv
from kinproj.problems import fine_grid_reference


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results/temporal_orders")
    ap.add_argument("--ref-dir", default="references")
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)

    for eps in (1e-5, 1e-8):
        for outer in ("pfe", "prk2", "prk4"):
            rep = temporal_order_sweep("advection1d", outer, DT_SWEEP, I=100,
                                       scheme="upwind3", eps=eps, T=0.04)
            path = os.path.join(args.out_dir, f"advection_{outer}_eps{eps:g}.csv")
            write_report_csv(rep, path, x_name="Dt")
            note = " (insufficient points)" if rep.insufficient_points else ""
            print(f"advection {outer} eps={eps:g}: order {rep.slope:.3f}"
                  f" floor {rep.floor:.2e}{note}")

    ref, _ = fine_grid_reference(
        "burgers1d",
        dict(I=200, scheme="upwind3", outer="prk4", eps=1e-8, K=2, T=0.04,
             Dt=1e-6, ic="gauss"),
        out_dir=args.ref_dir,
    )
    for outer in ("pfe", "prk2", "prk4"):
        rep = temporal_order_sweep("burgers1d", outer, DT_SWEEP, I=200,
                                   scheme="upwind3", eps=1e-8, T=0.04,
                                   reference=ref)
        path = os.path.join(args.out_dir, f"burgers_{outer}.csv")
        write_report_csv(rep, path, x_name="Dt")
        print(f"burgers {outer} eps=1e-08: order {rep.slope:.3f} floor {rep.floor:.2e}")


if __name__ == "__main__":
    main()
