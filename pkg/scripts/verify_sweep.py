"""Certify both scattering families on every preset body and print one line per run."""

import argparse
import json

from hardscatter.cli import PRESETS, resolve_body
from hardscatter.scattering import FAMILIES, verify_family


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true", help="emit the full reports as JSON lines")
    args = ap.parse_args()

    for name in PRESETS:
        body = resolve_body(f"preset:{name}")
        for family in FAMILIES:
            if family == "canonical" and not body.strictly_convex:
                print(f"{name:10s} {family:13s} skipped (needs a smooth boundary)")
                continue
            rep = verify_family(family, body.mass_inertia, body, args.samples, args.seed)
            if args.json:
                print(json.dumps(dict(rep.to_dict(), body=name)))
                continue
            print(f"{name:10s} {family:13s} {'pass' if rep.passed() else 'FAIL'}  det {rep.det_residual:.1e}  "
                  f"mom {rep.momentum_residual_max:.1e}  ang {rep.angular_residual_max:.1e}  "
                  f"energy {rep.energy_residual_max:.1e}  half-space {rep.halfspace_violations}/"
                  f"{rep.halfspace_checked}")


if __name__ == "__main__":
    main()
