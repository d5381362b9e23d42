"""Command-line entry point.

Exit status: 0 when every check passes, 1 when a check fails, 2 on invalid
input.  Every report carries the seed, the body hash, the package version and
the command line, so a rerun with the same arguments reproduces it exactly.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import DomainError, InputError, InvalidStateError
from .geometry import CollisionParam2D, ConvexBody2D, body_from_dict, docd_many, load_body

PRESETS = {
    "disk": {"type": "disk", "r": 0.5},
    "square": {"type": "polygon", "vertices": [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]]},
    "squareish": {"type": "support_fourier", "cos": [1, 0, 0, 0, 0.05]},
    "eccentric": {"type": "support_fourier", "cos": [1, 0, 0.15], "sin": [0, 0, 0.03]},
    "oval": {"type": "support_fourier", "cos": [1, 0, 0.1]},
}


def resolve_body(arg: str) -> ConvexBody2D:
    """A JSON descriptor file, or ``preset:NAME`` for one of :data:`PRESETS`."""
    if arg.startswith("preset:"):
        name = arg.split(":", 1)[1]
        if name not in PRESETS:
            raise InputError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        return body_from_dict(PRESETS[name])
    return load_body(arg)


def _meta(args, body=None) -> dict:
    return {
        "seed": getattr(args, "seed", None),
        "body_hash": body.hash() if body is not None else None,
        "body": body.to_dict() if body is not None else None,
        "version": __version__,
        "argv": list(args.argv),
    }


def _clean(x):
    """Make numpy values JSON-serializable; non-finite floats become strings."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    return x


def _emit(args, payload: dict | None = None, rows=None, header=None):
    if rows is not None and args.format == "csv":
        buf = io.StringIO()
        for k, v in payload["meta"].items():
            buf.write(f"# {k}: {json.dumps(_clean(v))}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(x) for x in r])
        text = buf.getvalue()
    else:
        if rows is not None:
            payload = dict(payload, columns=header, rows=rows)
        text = json.dumps(_clean(payload), indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands -------------------------------------------------------------------


def cmd_docd(args) -> int:
    body = resolve_body(args.body)
    psi = np.arange(args.grid) * (2 * math.pi / args.grid)
    d = docd_many(body, psi, args.theta, args.theta_bar)
    rows = [[float(p), float(v)] for p, v in zip(psi, d)]
    _emit(args, {"meta": _meta(args, body), "theta": args.theta, "theta_bar": args.theta_bar},
          rows, ["psi", "d"])
    return 0


def cmd_verify(args) -> int:
    from .scattering import TOL_ANGULAR, TOL_DET, TOL_ENERGY, TOL_MOMENTUM, verify_family

    body = resolve_body(args.body)
    rep = verify_family(args.family, body.mass_inertia, body, args.samples, args.seed)
    tols = dict(tol_det=TOL_DET, tol_momentum=TOL_MOMENTUM, tol_angular=TOL_ANGULAR, tol_energy=TOL_ENERGY)
    if args.tol is not None:
        tols = {k: args.tol for k in tols}
    ok = rep.passed(**tols)
    _emit(args, {"meta": _meta(args, body), "report": rep.to_dict(), "tolerances": tols, "passed": ok})
    return 0 if ok else 1


def cmd_lie(args) -> int:
    from .liealg import (generator3_curve, generator4_curve, gamma_direction_rank, k_pattern_residual,
                         orientation_grid, psi_grid, span_rank)
    from .spheres import so3_span_probe

    body = resolve_body(args.body)
    mi = body.mass_inertia
    psi = psi_grid(args.grid)
    per = []
    worst = {"K_rank": 3, "gamma_span_rank": 3, "gamma_direction_rank": 3}
    min_gap = math.inf
    flags = []
    for th, thb in orientation_grid(args.orient_grid):
        G4 = generator4_curve(mi, body, th, thb, psi)
        G3 = generator3_curve(mi, body, th, thb, psi)
        rk = span_rank(list(G4))
        rg = span_rank(list(G3))
        rd = gamma_direction_rank(mi, body, th, thb, args.grid)
        per.append({"theta": th, "theta_bar": thb, "K_rank": rk.rank, "gamma_span_rank": rg.rank,
                    "gamma_direction_rank": rd.rank, "K_pattern_residual": float(k_pattern_residual(G4).max()),
                    "K_singular_values": rk.singular_values[:4], "gamma_singular_values": rg.singular_values[:4],
                    "gaps": [rk.gap, rg.gap, rd.gap]})
        worst["K_rank"] = min(worst["K_rank"], rk.rank)
        worst["gamma_span_rank"] = min(worst["gamma_span_rank"], rg.rank)
        worst["gamma_direction_rank"] = min(worst["gamma_direction_rank"], rd.rank)
        min_gap = min(min_gap, rk.gap, rg.gap, rd.gap)
    if args.grid < 3:
        flags.append(f"psi grid of {args.grid} points cannot reach rank 3")
    so3, proj = so3_span_probe()
    ok = all(v == 3 for v in worst.values()) and so3.rank == 3 and min_gap >= 10
    _emit(args, {"meta": _meta(args, body), **worst, "so3_rank": so3.rank,
                 "so3_singular_values": so3.singular_values, "so3_projection_residuals": proj,
                 "min_gap": min_gap, "flags": flags, "orientations": per, "passed": ok})
    return 0 if ok else 1


def cmd_invariants(args) -> int:
    from .invariants import BasisSpec, expected_kernel, kernel_recovery_residual, nullspace_solve

    if args.family == "sphere":
        body, mi, spec = None, None, BasisSpec(sphere=True)
    else:
        body = resolve_body(args.body)
        mi, spec = body.mass_inertia, BasisSpec(K=args.fourier, cross=args.cross)
    res = nullspace_solve(args.family, mi, body, spec, args.samples, args.seed)
    rec = kernel_recovery_residual(res, expected_kernel(args.family, spec, mi)) if res.dimension else math.inf
    out = res.to_dict()
    out["recovery_residual"] = rec
    flags = []
    if res.inconclusive:
        flags.append("inconclusive: singular-value gap below guard")
    if res.dimension != res.expected_dimension:
        flags.append(f"dimension {res.dimension} != expected {res.expected_dimension}")
    _emit(args, {"meta": _meta(args, body), "result": out, "flags": flags, "passed": res.passed})
    return 0 if res.passed else 1


def cmd_sphere_suite(args) -> int:
    from .spheres import sphere_suite

    rep = sphere_suite(args.samples, args.seed, corrupt=args.corrupt)
    _emit(args, {"meta": _meta(args), **rep})
    return 0 if rep["passed"] else 1


def cmd_simulate(args) -> int:
    from .dynamics import CSV_HEADER, ParticleState, scenario, simulate

    body = resolve_body(args.body)
    if args.init:
        try:
            with open(args.init) as fh:
                spec = json.load(fh)
            init = ParticleState(spec["x"], spec["x_bar"], float(spec["theta"]), float(spec["theta_bar"]),
                                 spec["V"], float(spec.get("t", 0.0)))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"bad initial state file: {exc}") from exc
    else:
        try:
            init = scenario(args.scenario, body)
        except KeyError as exc:
            raise InputError(str(exc)) from exc
    res = simulate(body, body.mass_inertia, init, args.family, args.horizon, args.max_events)
    rows = [e.csv_row() for e in res.events]
    summary = {"meta": _meta(args, body), "events": len(res.events), "truncated": res.truncated,
               "min_F": res.min_F, "max_momentum_residual": res.max_momentum_residual,
               "max_energy_residual": res.max_energy_residual, "max_angular_residual": res.max_angular_residual,
               "conservation_ok": res.conservation_ok}
    summary["meta"] = dict(summary["meta"], **{k: v for k, v in summary.items() if k != "meta"})
    _emit(args, summary, rows, CSV_HEADER)
    ok = res.conservation_ok and res.min_F >= -1e-9
    return 0 if ok else 1


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hardscatter", description="Scattering and collision-invariant checks.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, body=True, fmt="json"):
        if body:
            p.add_argument("--body", default="preset:eccentric", help="descriptor JSON file or preset:NAME")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("json", "csv"), default=fmt)

    p = sub.add_parser("docd", help="distance of closest approach over a psi grid")
    common(p, fmt="csv")
    p.add_argument("--grid", type=int, default=360)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--theta-bar", dest="theta_bar", type=float, default=0.0)
    p.set_defaults(func=cmd_docd)

    p = sub.add_parser("verify", help="certify a scattering family")
    common(p)
    p.add_argument("--family", choices=("canonical", "noncanonical"), default="noncanonical")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=None, help="override every residual tolerance")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lie", help="Lie-algebra rank probes")
    common(p)
    p.add_argument("--grid", type=int, default=64, help="psi samples per orientation pair")
    p.add_argument("--orient-grid", dest="orient_grid", type=int, default=8)
    p.set_defaults(func=cmd_lie)

    p = sub.add_parser("invariants", help="nullspace of the collision-invariant system")
    common(p)
    p.add_argument("--family", choices=("canonical", "noncanonical", "sphere"), default="noncanonical")
    p.add_argument("--fourier", type=int, default=1)
    p.add_argument("--cross", action="store_true")
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("sphere-suite", help="hard-sphere checks")
    common(p, body=False)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--corrupt", action="store_true", help="negative control: unnormalized reflection vector")
    p.set_defaults(func=cmd_sphere_suite)

    p = sub.add_parser("simulate", help="event-driven two-particle run")
    common(p, fmt="csv")
    p.add_argument("--family", choices=("canonical", "noncanonical"), default="canonical")
    p.add_argument("--scenario", default="head-on")
    p.add_argument("--init", default=None, help="JSON initial state {x, x_bar, theta, theta_bar, V}")
    p.add_argument("--horizon", type=float, default=5.0)
    p.add_argument("--max-events", dest="max_events", type=int, default=100)
    p.set_defaults(func=cmd_simulate)
    return ap


def _validate(args):
    for name in ("samples", "grid", "orient_grid", "max_events"):
        val = getattr(args, name, None)
        if val is not None and val <= 0:
            raise InputError(f"--{name.replace('_', '-')} must be positive")
    if getattr(args, "fourier", 0) < 0:
        raise InputError("--fourier must be non-negative")
    if getattr(args, "horizon", 1.0) <= 0:
        raise InputError("--horizon must be positive")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else 2
    args.argv = ["hardscatter", *argv]
    try:
        _validate(args)
        return args.func(args)
    except (InputError, DomainError, InvalidStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
