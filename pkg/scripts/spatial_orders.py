#!/usr/bin/env python3
"""Spatial order-of-accuracy study on 1D linear advection.

Sweeps the grid spacing with the outer step coupled to it, for projective
forward Euler and projective RK2/RK4 with upwind and ENO stencils, and
reports the fitted convergence orders. Writes one CSV per (method, order).
"""

import argparse
import os

from kinproj.harness import DX_SWEEP, paper_coupling, spatial_order_sweep, write_report_csv

CASES = [
    ("pfe", "upwind", (1, 2, 3)),
    ("prk2", "upwind", (1, 2, 3)),
    ("prk4", "upwind", (1, 2, 3)),
    ("prk4", "eno", (1, 2, 3)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results/spatial_orders")
    ap.add_argument("--eps", type=float, default=1e-8)
    ap.add_argument("--T", type=float, default=0.02)
    ap.add_argument("--min-dx", type=float, default=0.0005,
                    help="truncate the sweep (the PFE dx^3 coupling is costly below this)")
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)

    for outer, family, orders in CASES:
        for p in orders:
            dxs = [d for d in DX_SWEEP
                   if d >= (args.min_dx if (outer, p) == ("pfe", 3) else DX_SWEEP[-1])]
            rep = spatial_order_sweep(
                "advection1d", outer, f"{family}{p}", dxs,
                paper_coupling(outer, p), eps=args.eps, T=args.T,
            )
            path = os.path.join(args.out_dir, f"{outer}_{family}{p}.csv")
            write_report_csv(rep, path, x_name="dx")
            print(f"{outer:<5} {family}{p}: order {rep.slope:.3f}  -> {path}")


if __name__ == "__main__":
    main()
