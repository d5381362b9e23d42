"""Run every named scenario with both families and report events and conservation."""

import argparse

from hardscatter.cli import resolve_body
from hardscatter.dynamics import SCENARIOS, reversibility_probe, scenario, simulate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--body", default="preset:eccentric")
    ap.add_argument("--horizon", type=float, default=6.0)
    args = ap.parse_args()
    body = resolve_body(args.body)

    for name in SCENARIOS:
        init = scenario(name, body)
        for family in ("canonical", "noncanonical"):
            res = simulate(body, None, init, family, args.horizon)
            rev = reversibility_probe(body, None, init, family, args.horizon)
            times = ", ".join(f"{e.t_event:.6f}" for e in res.events) or "-"
            print(f"{name:13s} {family:13s} events [{times}]  min F {res.min_F:.2e}  "
                  f"conserved {res.conservation_ok}  replay {rev:.1e}")


if __name__ == "__main__":
    main()
