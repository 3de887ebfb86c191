"""Command-line interface: ``bayes-security <command> ...``.

Reports go to stdout as JSON (or CSV for sweeps and experiments). Domain
errors exit with status 1 and a JSON object ``{"error": code, "message": ...}``
on stderr; usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import math
import shlex
import sys
from typing import Optional, Sequence

import numpy as np

from . import composition, dp_bridge, experiments, mechanisms, metrics, minimizer
from .blackbox import ProcessOracle, blackbox_beta_star_bound, plugin_beta_star
from .errors import BayesSecurityError, InvalidParameters
from .io import channel_to_csv_text, load_channel, load_prior, load_vector, save_channel


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _emit(obj, out) -> None:
    out.write(json.dumps(obj, allow_nan=False, indent=2) + "\n")


def _write_text(text: str, path: Optional[str], out) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)


def _parse_range(spec: str) -> tuple:
    try:
        lo, hi, steps = spec.split(":")
        return float(lo), float(hi), int(steps)
    except ValueError:
        raise InvalidParameters(f"expected lo:hi:steps, got {spec!r}") from None


# --- command handlers -----------------------------------------------------------


def cmd_analyze(args, out):
    channel = load_channel(args.channel, renormalize=args.renormalize)
    rep = minimizer.beta_star(channel, args.method)
    eps = dp_bridge.ldp_epsilon(channel)
    result = {
        "schema_version": 1,
        "n": channel.n,
        "m": channel.m,
        "beta_star": rep.beta_star,
        "pair": list(rep.pair) if rep.pair is not None else None,
        "method": rep.method,
        "lower": rep.lower,
        "upper": rep.upper,
        "capacity": metrics.capacity(channel),
        "ldp_epsilon": _finite(eps),
        "is_ldp": math.isfinite(eps),
    }
    if args.prior:
        result["metrics"] = metrics.metric_report(load_prior(args.prior), channel).to_dict()
    _emit(result, out)


def cmd_beta(args, out):
    channel = load_channel(args.channel, renormalize=args.renormalize)
    if args.pair:
        a, b = args.pair
        _emit({"schema_version": 1, "pair": [a, b], "beta": metrics.pair_beta(channel, a, b)}, out)
        return
    prior = load_prior(args.prior) if args.prior else None
    if prior is None:
        raise InvalidParameters("give --prior or --pair")
    _emit(metrics.metric_report(prior, channel).to_dict(), out)


def cmd_compose(args, out):
    c1 = load_channel(args.first)
    c2 = load_channel(args.second)
    combined = composition.parallel(c1, c2) if args.mode == "parallel" else composition.cascade(c1, c2)
    if args.output:
        save_channel(combined, args.output)
    else:
        out.write(channel_to_csv_text(combined))


def cmd_mech(args, out):
    grid = _parse_range(args.grid) if args.grid else None
    secrets = tuple(load_vector(args.secrets)) if args.secrets else None
    spec = mechanisms.MechanismSpec(
        kind=args.kind,
        n=args.n,
        m=args.m,
        epsilon=args.eps,
        delta=args.delta,
        lam=args.lam,
        sigma=args.sigma,
        nu=args.nu,
        secrets=secrets,
    )
    _check_mech_args(spec)
    result = {"schema_version": 1, "mechanism": spec.to_dict(), "beta_star": spec.beta_star()}
    if args.emit_channel:
        save_channel(spec.channel(grid), args.emit_channel)
        result["channel_path"] = args.emit_channel
    _emit(result, out)


def _check_mech_args(spec) -> None:
    missing = []
    if spec.kind == "rr":
        missing = [k for k in ("n", "epsilon") if getattr(spec, k) is None]
    elif spec.kind == "geometric":
        missing = [k for k in ("n", "m", "nu") if getattr(spec, k) is None]
    elif spec.kind == "laplace":
        missing = ["lam"] if spec.secrets is not None and spec.lam is None else []
        if spec.secrets is None and spec.epsilon is None:
            missing = ["epsilon or secrets"]
    elif spec.kind == "gaussian":
        if spec.secrets is not None:
            missing = ["sigma"] if spec.sigma is None else []
        else:
            missing = [k for k in ("epsilon", "delta") if getattr(spec, k) is None]
    if missing:
        raise InvalidParameters(f"{spec.kind} needs: {', '.join(missing)}")


def cmd_bounds(args, out):
    if args.kind == "adv" and args.sweep:
        lo, hi, steps = _parse_range(args.sweep)
        lines = ["epsilon,advantage_tight,advantage_yeom"]
        for eps in np.linspace(lo, hi, steps):
            tight, yeom = dp_bridge.advantage_bounds(float(eps))
            lines.append(f"{float(eps)!r},{tight!r},{yeom!r}")
        _write_text("\n".join(lines) + "\n", args.output, out)
        return
    if args.eps is None:
        raise InvalidParameters("--eps is required")
    if args.kind == "ldp":
        rep = dp_bridge.ldp_report(args.eps)
    elif args.kind == "dp":
        if args.v is None or args.records is None:
            raise InvalidParameters("dp bounds need --v and --records")
        rep = dp_bridge.dp_report(args.eps, args.v, args.records, args.max_prior)
    else:
        rep = dp_bridge.advantage_report(args.eps)
    _emit(rep.to_dict(), out)


def cmd_check(args, out):
    channel = load_channel(args.channel)
    if args.kind == "ldp":
        eps = dp_bridge.ldp_epsilon(channel)
        result = {"schema_version": 1, "ldp_epsilon": _finite(eps), "is_ldp": math.isfinite(eps)}
        if args.eps is not None:
            result["satisfies"] = eps <= args.eps + 1e-12
            result["epsilon"] = args.eps
        _emit(result, out)
        return
    eps = 0.0 if args.eps is None else args.eps
    delta = 0.0 if args.delta is None else args.delta
    result = dp_bridge.check_approx_ldp(channel, eps, delta).to_dict()
    result.update(epsilon=eps, delta=delta, min_delta=dp_bridge.min_approx_ldp_delta(channel, eps))
    _emit(result, out)


def cmd_estimate(args, out):
    if args.channel:
        oracle = load_channel(args.channel)
        n = oracle.n
    elif args.oracle_cmd:
        if args.n is None:
            raise InvalidParameters("--oracle-cmd needs --n")
        oracle = ProcessOracle(shlex.split(args.oracle_cmd), m=args.m)
        n = args.n
    else:
        raise InvalidParameters("give --channel or --oracle-cmd")
    try:
        if args.bound:
            rep = blackbox_beta_star_bound(oracle, n, args.bound, args.budget, args.seed)
        else:
            rep = plugin_beta_star(oracle, n, args.budget, args.seed, prune=args.prune)
    finally:
        if isinstance(oracle, ProcessOracle):
            oracle.close()
    _emit(rep.to_dict(), out)


def cmd_experiment(args, out):
    if args.name == "sparsity":
        rows = experiments.sparsity_experiment(
            args.kind, n=args.n, m=args.m, nu=args.nu, trials=args.trials, seed=args.seed, layout=args.layout
        )
        _write_text(experiments.rows_to_csv(rows), args.output, out)
    elif args.name == "rr-utility":
        res = experiments.rr_utility_experiment(
            None, args.eps, args.samples, args.seed, estimate_budget=args.estimate_budget
        )
        _emit(res.to_dict(), out)
    else:
        rows = experiments.centroid_study()
        lines = ["n,epsilon,lower,upper,beta_star"]
        lines += [f"{r['n']},{r['epsilon']!r},{r['lower']!r},{r['upper']!r},{r['beta_star']!r}" for r in rows]
        _write_text("\n".join(lines) + "\n", args.output, out)


# --- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bayes-security", description="Bayes security of discrete channels.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="beta*, minimizing pair, capacity and LDP level of a channel")
    a.add_argument("channel", help="channel file (.csv or .json)")
    a.add_argument("--method", default="exhaustive", choices=sorted(minimizer.METHODS))
    a.add_argument("--prior", help="prior JSON; adds beta and leakage under it")
    a.add_argument("--renormalize", action="store_true", help="divide each row by its sum")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("beta", help="beta under a given prior or a two-point prior")
    b.add_argument("channel")
    g = b.add_mutually_exclusive_group(required=True)
    g.add_argument("--prior", help="prior JSON")
    g.add_argument("--pair", type=int, nargs=2, metavar=("A", "B"))
    b.add_argument("--renormalize", action="store_true")
    b.set_defaults(func=cmd_beta)

    c = sub.add_parser("compose", help="parallel or cascade composition")
    mode = c.add_mutually_exclusive_group(required=True)
    mode.add_argument("--parallel", dest="mode", action="store_const", const="parallel")
    mode.add_argument("--cascade", dest="mode", action="store_const", const="cascade")
    c.add_argument("first")
    c.add_argument("second")
    c.add_argument("-o", "--output", help="output channel file (default: CSV on stdout)")
    c.set_defaults(func=cmd_compose)

    m = sub.add_parser("mech", help="closed-form beta* of a standard mechanism")
    m.add_argument("kind", choices=["rr", "laplace", "gaussian", "geometric"])
    m.add_argument("--n", type=int)
    m.add_argument("--m", type=int)
    m.add_argument("--eps", type=float)
    m.add_argument("--delta", type=float)
    m.add_argument("--lambda", dest="lam", type=float)
    m.add_argument("--sigma", type=float)
    m.add_argument("--nu", type=float)
    m.add_argument("--secrets", help="file with secret locations")
    m.add_argument("--grid", help="discretization grid lo:hi:bins")
    m.add_argument("--emit-channel", help="write the (discretized) channel here")
    m.set_defaults(func=cmd_mech)

    bd = sub.add_parser("bounds", help="DP/LDP bounds on beta and on advantage")
    bd.add_argument("kind", choices=["ldp", "dp", "adv"])
    bd.add_argument("--eps", type=float)
    bd.add_argument("--v", type=int, help="number of values per record")
    bd.add_argument("--records", type=int, help="number of records")
    bd.add_argument("--max-prior", type=float)
    bd.add_argument("--sweep", help="adv only: lo:hi:steps, emits CSV")
    bd.add_argument("-o", "--output")
    bd.set_defaults(func=cmd_bounds)

    ck = sub.add_parser("check", help="check LDP or approximate LDP")
    ck.add_argument("kind", choices=["ldp", "aldp"])
    ck.add_argument("channel")
    ck.add_argument("--eps", type=float)
    ck.add_argument("--delta", type=float)
    ck.set_defaults(func=cmd_check)

    e = sub.add_parser("estimate", help="black-box estimate of beta* from samples")
    e.add_argument("--channel", help="sample from this channel file")
    e.add_argument("--oracle-cmd", help="external oracle program (line protocol)")
    e.add_argument("--n", type=int, help="secret count for --oracle-cmd")
    e.add_argument("--m", type=int, help="observable count for --oracle-cmd")
    e.add_argument("--budget", type=int, default=10_000, help="samples per pair (or total for --bound)")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--prune", action="store_true")
    e.add_argument("--bound", choices=["mean_row", "fixed_row", "uniform_output"])
    e.set_defaults(func=cmd_estimate)

    x = sub.add_parser("experiment", help="experiment drivers")
    x.add_argument("name", choices=["sparsity", "rr-utility", "centroid"])
    x.add_argument("--kind", default="random", choices=["random", "geometric"])
    x.add_argument("--n", type=int, default=10)
    x.add_argument("--m", type=int, default=1000)
    x.add_argument("--nu", type=float, default=0.1)
    x.add_argument("--layout", default="unit", choices=["unit", "spread"], help="geometric secret placement")
    x.add_argument("--trials", type=int, default=200)
    x.add_argument("--eps", type=float, default=1.0)
    x.add_argument("--samples", type=int, default=100_000)
    x.add_argument("--estimate-budget", type=int)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("-o", "--output")
    x.set_defaults(func=cmd_experiment)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except BayesSecurityError as exc:
        _emit({"error": exc.code, "message": str(exc)}, err)
        return 1
    except OSError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, err)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
