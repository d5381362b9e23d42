"""Kernel dimension of the collision-invariant system over Fourier orders, families and bodies."""

import argparse
import time

from hardscatter.cli import resolve_body
from hardscatter.invariants import BasisSpec, expected_kernel, kernel_recovery_residual, nullspace_solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bodies", nargs="+", default=["squareish", "eccentric", "oval"])
    ap.add_argument("--orders", nargs="+", type=int, default=[0, 1, 2])
    ap.add_argument("--cross", action="store_true", help="also run with Fourier x monomial products")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'body':10s} {'family':13s} K cross  dim expect  gap       valid     recover   time")
    for name in args.bodies:
        body = resolve_body(f"preset:{name}")
        for K in args.orders:
            for family in ("canonical", "noncanonical"):
                for cross in ((False, True) if args.cross else (False,)):
                    spec = BasisSpec(K=K, cross=cross)
                    t0 = time.perf_counter()
                    res = nullspace_solve(family, body.mass_inertia, body, spec, seed=args.seed)
                    rec = kernel_recovery_residual(res, expected_kernel(family, spec, body.mass_inertia))
                    print(f"{name:10s} {family:13s} {K} {cross!s:5s}  {res.dimension:3d} {res.expected_dimension:6d}"
                          f"  {res.gap:.1e}  {max(res.validation_residuals, default=float('nan')):.1e}"
                          f"  {rec:.1e}  {time.perf_counter() - t0:.1f}s")
    res = nullspace_solve("sphere", None, None, BasisSpec(sphere=True), seed=args.seed)
    rec = kernel_recovery_residual(res, expected_kernel("sphere", BasisSpec(sphere=True), None))
    print(f"{'spheres':10s} {'-':13s} - -      {res.dimension:3d} {5:6d}  {res.gap:.1e}"
          f"  {max(res.validation_residuals):.1e}  {rec:.1e}")


if __name__ == "__main__":
    main()
