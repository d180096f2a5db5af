"""Command-line front end: JSON spec in, JSON or CSV out.

Subcommands expose each pipeline: win-prob, absorb-dist, pgf, simulate, and
verify. Exit codes: 0 all good, 1 a verification check failed, 2 invalid
input. All numeric JSON output round-trips at full precision.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .absorption import absorb_dist, pgf_from_dual
from .birth_death import bd_win_prob
from .errors import CouplingError, HorizonError, SpecError
from .game import build_game, multi_index
from .intertwine import build_dual, dual_initial
from .siegmund import win_prob_product, win_prob_solve
from .specfile import load_spec
from .simulate import SimConfig, simulate, simulate_coupled
from .verify import all_passed, run_checks

ENV_WORKERS = "GAMBLER_WORKERS"


def _fail(message: str, field: str | None = None) -> int:
    body = {"error": message}
    if field:
        body["field"] = field
    print(json.dumps(body), file=sys.stderr)
    return 2


def _workers(default: int = 1) -> int:
    raw = os.environ.get(ENV_WORKERS)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise SpecError(f"{ENV_WORKERS} must be an integer, got {raw!r}")
    if value < 1:
        raise SpecError(f"{ENV_WORKERS} must be >= 1")
    return value


def _state_key(dims, linear: int) -> str:
    multi = multi_index(dims, linear)
    return ",".join(str(c) for c in multi)


def _parse_start(arg: str | None, parsed):
    if arg is None:
        return parsed.start
    try:
        coords = tuple(int(c) for c in arg.split(","))
    except ValueError:
        raise SpecError(f"--start must be comma-separated integers, got {arg!r}")
    return coords


def cmd_win_prob(args) -> int:
    parsed = load_spec(args.spec)
    game = parsed.game
    chain = build_game(game)
    rho_prod = win_prob_product(game)
    rho_solve = win_prob_solve(chain)
    dims = game.shape
    out = {
        "rho": {
            _state_key(dims, i + 1): float(v) for i, v in enumerate(rho_prod)
        },
        "rho_solve": {
            _state_key(dims, i + 1): float(v) for i, v in enumerate(rho_solve)
        },
        "method_agreement": float(np.max(np.abs(rho_prod - rho_solve))),
    }
    print(json.dumps(out, indent=2))
    return 0


def _delta_start(game, start):
    nu = np.zeros(game.size)
    nu[int(np.ravel_multi_index([c - 1 for c in start], game.shape))] = 1.0
    return nu


def cmd_absorb_dist(args) -> int:
    parsed = load_spec(args.spec)
    game = parsed.game
    start = _parse_start(args.start, parsed)
    chain = build_game(game)
    target = chain.win_index if args.target == "win" else chain.sink_index
    nu = np.concatenate([[0.0], _delta_start(game, start)])
    horizon = args.horizon if args.horizon is not None else parsed.horizon
    eps = args.eps if args.eps is not None else parsed.eps
    dist = absorb_dist(chain, nu, target=target, horizon=horizon, eps=eps)
    print("t,pmf,cdf")
    cdf = 0.0
    for t, mass in enumerate(dist.pmf):
        cdf += float(mass)
        print(f"{t},{float(mass)!r},{cdf!r}")
    if dist.tail > eps:
        print(f"# tail,{float(dist.tail)!r}")
    return 0


def cmd_pgf(args) -> int:
    parsed = load_spec(args.spec)
    game = parsed.game
    start = _parse_start(args.start, parsed)
    chain = build_game(game)
    link, dual = build_dual(game, chain=chain)
    nu = _delta_start(game, start)
    weights = dual_initial(link, nu)
    mix = pgf_from_dual(link, dual, weights.values, eps=parsed.eps)
    points = [float(s) for s in args.eval.split(",")] if args.eval else [1.0]
    values = {repr(s): mix.evaluate(s) for s in points}
    rho = float(
        np.prod([bd_win_prob(spec)[c - 1] for spec, c in zip(game.dims, start)])
    )
    print(json.dumps({"values": values, "rho_at_1": rho}, indent=2))
    return 0


def cmd_simulate(args) -> int:
    parsed = load_spec(args.spec)
    game = parsed.game
    start = _parse_start(args.start, parsed)
    runs = args.runs if args.runs is not None else parsed.runs
    seed = args.seed if args.seed is not None else parsed.seed
    cfg = SimConfig(runs=runs, seed=seed, workers=_workers())
    if args.coupled:
        report = simulate_coupled(game, _delta_start(game, start), cfg)
    else:
        chain = build_game(game)
        report = simulate(chain, start, cfg)
    print(json.dumps(report.as_dict(), indent=2))
    return 0


def cmd_verify(args) -> int:
    parsed = load_spec(args.spec)
    checks = run_checks(parsed.game, start=parsed.start, eps=parsed.eps)
    print(json.dumps({"checks": [c.as_dict() for c in checks]}, indent=2))
    return 0 if all_passed(checks) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krongambler",
        description="Multidimensional gambler's-ruin games via Kronecker mixing",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("win-prob", help="winning probabilities, two methods")
    p.add_argument("spec")
    p.set_defaults(func=cmd_win_prob)

    p = sub.add_parser("absorb-dist", help="absorption-time pmf as CSV")
    p.add_argument("spec")
    p.add_argument("--start")
    p.add_argument("--target", choices=["win", "lose"], default="win")
    p.add_argument("--horizon", type=int)
    p.add_argument("--eps", type=float)
    p.set_defaults(func=cmd_absorb_dist)

    p = sub.add_parser("pgf", help="evaluate the absorption-time pgf")
    p.add_argument("spec")
    p.add_argument("--start")
    p.add_argument("--eval", help="comma-separated evaluation points")
    p.set_defaults(func=cmd_pgf)

    p = sub.add_parser("simulate", help="Monte Carlo estimate")
    p.add_argument("spec")
    p.add_argument("--start")
    p.add_argument("--runs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--coupled", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the full identity suite")
    p.add_argument("spec")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        return _fail(str(exc), getattr(exc, "field", None))
    except (ValueError, CouplingError, HorizonError, FileNotFoundError) as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
