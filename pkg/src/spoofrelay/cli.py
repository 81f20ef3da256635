"""Command-line entry point: ``spoofrelay {solve,baselines,sweep,verify}``."""

import argparse
import dataclasses
import json
import os
import sys

from .baselines import jamming_rate, passive_rate
from .channel import ConfigError, ZFInfeasibleError, load_scenario, project, synthesize
from .harness import ALIASES, PRESETS, emit_csv, emit_json, load_sweep_spec, preset, run_sweep
from .oracle import GRID_1D, GRID_2D, run_verification

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_VERIFY = 4


def _instance(path):
    sc, seed = load_scenario(path)
    cs = synthesize(sc, seed)
    return cs, project(cs)


def _cmd_solve(args):
    from .solver import solve
    cs, pc = _instance(args.config)
    sol = solve(cs, pc)
    d = sol.to_dict()
    if args.json:
        print(json.dumps(d, indent=1))
    else:
        for key in ("mode", "case", "rho_star", "gamma_D", "gamma_E", "rate_bps_hz",
                    "jam_power_used"):
            print(f"{key}: {d[key]}")
        for key, val in d["breakpoints"].items():
            print(f"{key}: {val}")
    return EXIT_OK if sol.feasible else EXIT_INFEASIBLE


def _cmd_baselines(args):
    cs, pc = _instance(args.config)
    res = [passive_rate(cs), jamming_rate(cs, pc)]
    if args.json:
        print(json.dumps([{**dataclasses.asdict(r), "scheme": r.scheme.value} for r in res]))
    else:
        for r in res:
            print(f"{r.scheme.value}: rate_bps_hz={r.rate_bps_hz!r} jam_power_used={r.jam_power_used!r}")
    return EXIT_OK


def _cmd_sweep(args):
    if args.spec in PRESETS or args.spec in ALIASES:
        spec = preset(args.spec, d_se=args.d_se, points=args.points)
    elif os.path.exists(args.spec):
        spec = load_sweep_spec(args.spec)
    else:
        raise ConfigError(f"{args.spec!r} is neither a preset {PRESETS} nor a file")
    rows = run_sweep(spec, workers=args.workers)
    if args.json:
        emit_json(rows, args.out)
    else:
        emit_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _cmd_verify(args):
    rep = run_verification(instances=args.instances, seed=args.seed, grid_1d=args.grid,
                           grid_2d=args.grid2d, sandwich_trials=args.trials)
    print("\n".join(rep.lines()))
    return EXIT_OK if rep.passed else EXIT_VERIFY


def build_parser():
    p = argparse.ArgumentParser(prog="spoofrelay", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="optimal spoofing relay for one scenario")
    s.add_argument("config")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=_cmd_solve)

    s = sub.add_parser("baselines", help="passive and jamming-only rates")
    s.add_argument("config")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=_cmd_baselines)

    s = sub.add_parser("sweep", help="run a preset or custom sweep")
    s.add_argument("spec", help=f"one of {', '.join(PRESETS)} or a sweep file")
    s.add_argument("--out", required=True)
    s.add_argument("--json", action="store_true")
    s.add_argument("--d-se", type=float, default=None, dest="d_se")
    s.add_argument("--points", type=int, default=None)
    s.add_argument("--workers", type=int, default=None)
    s.set_defaults(func=_cmd_sweep)

    s = sub.add_parser("verify", help="check closed forms against brute force")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--grid", type=int, default=GRID_1D)
    s.add_argument("--grid2d", type=int, default=GRID_2D)
    s.add_argument("--instances", type=int, default=200)
    s.add_argument("--trials", type=int, default=1000)
    s.set_defaults(func=_cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ZFInfeasibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
