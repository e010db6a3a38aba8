#!/usr/bin/env python3
"""Burgers' equation with PRK4 + third-order ENO: snapshot the three starts.

Each initial condition (Gaussian pulse, sinc wave packet, sine wave) steepens
into shocks; the snapshots record the solution at several times up to t = 1.
"""

import argparse
import os

from kinproj.config import make_config
from kinproj.solver import solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results/burgers")
    ap.add_argument("--I", type=int, default=200)
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)

    for ic in ("gauss", "sinc", "sine"):
        cfg = make_config("burgers1d", ic=ic, I=args.I, T=1.0,
                          snapshots=(0.25, 0.5, 0.75, 1.0))
        res = solve(cfg)
        path = os.path.join(args.out_dir, f"burgers_{ic}.csv")
        with open(path, "w") as fh:
            times = sorted(res.snapshots)
            fh.write("x," + ",".join(f"u_t{t:g}" for t in times) + "\n")
            for i, x in enumerate(res.mesh.x):
                vals = [x] + [float(res.snapshots[t][i, 0]) for t in times]
                fh.write(",".join(f"{v:.17g}" for v in vals) + "\n")
        print(f"{ic}: {res.outer_steps} outer steps -> {path}")


if __name__ == "__main__":
    main()
