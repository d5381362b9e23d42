"""Tabulate and time the distance of closest approach for the preset bodies."""

import argparse
import csv
import math
import sys
import time

import numpy as np

from hardscatter.cli import PRESETS, resolve_body
from hardscatter.geometry import docd_many


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=720)
    ap.add_argument("--theta", type=float, default=0.0)
    ap.add_argument("--theta-bar", dest="theta_bar", type=float, default=0.0)
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    args = ap.parse_args()

    psi = np.arange(args.grid) * (2 * math.pi / args.grid)
    cols = {}
    for name in PRESETS:
        body = resolve_body(f"preset:{name}")
        t0 = time.perf_counter()
        cols[name] = docd_many(body, psi, args.theta, args.theta_bar)
        dt = time.perf_counter() - t0
        print(f"{name:10s} {1e3 * dt / args.grid:8.3f} ms/eval  min {cols[name].min():.6f}  "
              f"max {cols[name].max():.6f}", file=sys.stderr)

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh)
    w.writerow(["psi", *cols])
    for i, p in enumerate(psi):
        w.writerow(["%.17g" % p, *("%.17g" % cols[n][i] for n in cols)])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
