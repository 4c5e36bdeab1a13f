from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any

import pandas as pd

from bayesian.distributions import distribution_to_dict, load_distribution
from bayesian.estimates import bayes_prices_c_close, bayes_uniform_subadditive, bayes_uniform_xos
from cli.config import FORMATS, RunConfig, config_from_args
from cli.reporting import archive_report, banner, print_header, render
from cli.suites import SUITES, run_suite
from instances.catalog import CATALOG, generate
from instances.verify import verify_bound
from market.files import load_market, market_to_dict
from market.welfare import brute_force_optimal_welfare, optimal_welfare
from pricing.schemes import SCHEMES, run_scheme, summarize
from simulator.dynamics import describe, simulate
from simulator.prices import load_prices
from simulator.search import naive_worst_case, worst_case_for_order, worst_case_welfare
from valuations.errors import BadParams, PricingError
from valuations.rationals import format_rational, to_rational


# -----------------------
# Helpers
# -----------------------
def _emit(cfg: RunConfig, record: dict[str, Any]) -> None:
    """Single-result commands: key: value lines, or one JSON object."""
    clean = {k: format_rational(v) if isinstance(v, Fraction) else v for k, v in record.items()}
    if cfg.format == "json":
        print(json.dumps(clean, indent=2, default=str))
    else:
        for k, v in clean.items():
            print(f"{k}: {v}")


def _need_input(cfg: RunConfig):
    if cfg.input is None:
        raise BadParams(f"'{cfg.command}' needs -i/--input")
    return load_market(cfg.input, closure=cfg.closure)


def _need_prices(cfg: RunConfig, m: int):
    if cfg.prices is None:
        raise BadParams(f"'{cfg.command}' needs -p/--prices")
    return load_prices(cfg.prices, m=m)


def _parse_params(pairs: list[str] | None) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise BadParams(f"--param expects key=value, got '{pair}'")
        key, raw = pair.split("=", 1)
        try:
            out[key] = int(raw)
        except ValueError:
            out[key] = to_rational(raw)
    return out


def _parse_choices(spec: str | None) -> tuple[int, ...] | None:
    if not spec:
        return None
    try:
        return tuple(int(x) for x in spec.split(","))
    except ValueError as e:
        raise BadParams(f"--choices expects comma-separated quantities, got '{spec}'") from e


# -----------------------
# Commands
# -----------------------
def cmd_opt(cfg: RunConfig, args) -> int:
    market = _need_input(cfg)
    opt, alloc = optimal_welfare(market)
    record: dict[str, Any] = {"opt": opt, "allocation": list(alloc.quantities)}
    if cfg.naive:
        record["brute_force"] = brute_force_optimal_welfare(market)
    _emit(cfg, record)
    return 0


def cmd_worst(cfg: RunConfig, args) -> int:
    market = _need_input(cfg)
    prices = _need_prices(cfg, market.m)
    if cfg.order is not None:
        res = worst_case_for_order(market, prices, cfg.order, ties=cfg.ties)
    else:
        res = worst_case_welfare(
            market, prices, ties=cfg.ties, max_agents=cfg.max_agents, max_items=cfg.max_items
        )
    record: dict[str, Any] = {
        "welfare": res.welfare,
        "order": ",".join(map(str, res.order)),
        "ties": ",".join(map(str, res.ties)),
        "revenue": res.outcome.revenue,
        "states": res.states,
    }
    if cfg.naive:
        naive = naive_worst_case(market, prices)
        record["naive"] = naive
        record["agree"] = naive == res.welfare
    _emit(cfg, record)
    return 0 if record.get("agree", True) else 1


def cmd_simulate(cfg: RunConfig, args) -> int:
    market = _need_input(cfg)
    prices = _need_prices(cfg, market.m)
    order = cfg.order if cfg.order is not None else tuple(range(market.n))
    outcome = simulate(market, prices, order, _parse_choices(args.choices))
    _emit(
        cfg,
        {
            "welfare": outcome.welfare,
            "revenue": outcome.revenue,
            "allocation": list(outcome.allocation.quantities),
            "steps": describe(outcome),
        },
    )
    return 0


def cmd_scheme(cfg: RunConfig, args) -> int:
    if not cfg.scheme:
        raise BadParams(f"'scheme' needs --scheme, one of {', '.join(SCHEMES)}")
    market = _need_input(cfg)
    res = run_scheme(cfg.scheme, market, order=cfg.order, limits=cfg.limits)
    rows = [
        {
            "candidate": c.label,
            "prices": c.describe(),
            "welfare": c.welfare,
            "proof_bound": c.proof_bound,
            "chosen": i == res.chosen,
        }
        for i, c in enumerate(res.candidates)
    ]
    if cfg.format == "json":
        print(
            json.dumps(
                {
                    "scheme": res.scheme,
                    "opt": format_rational(res.opt),
                    "guarantee": format_rational(res.guarantee),
                    "welfare": format_rational(res.welfare),
                    "meets_guarantee": res.meets_guarantee,
                    "fallback": res.fallback,
                    "candidates": json.loads(render(pd.DataFrame(rows), "json")),
                },
                indent=2,
            )
        )
    else:
        print(summarize(res))
        print(render(pd.DataFrame(rows)))
    return 0 if res.meets_guarantee else 1


def cmd_verify(cfg: RunConfig, args) -> int:
    if not cfg.suite:
        raise BadParams(f"'verify' needs --suite, one of {', '.join(SUITES)}")
    seed = 0 if cfg.suite == "counterexamples" and cfg.seed is None else cfg.require_seed()
    if cfg.format == "table":
        print_header(cfg)
    df = run_suite(
        cfg.suite, cfg.trials, seed, cfg.n, cfg.m, cfg.limits, cfg.jobs, progress=cfg.format == "table"
    )
    print(render(df, cfg.format))
    passed = int(df["ok"].sum())
    if cfg.format == "table":
        banner(f"{cfg.suite}: {passed}/{len(df)} pass")
    if cfg.archive:
        archive_report(df, cfg.suite, cfg.report_dir)
    return 0 if passed == len(df) else 1


def cmd_instances(cfg: RunConfig, args) -> int:
    action = args.action
    if action == "list":
        df = pd.DataFrame(
            [{"id": k, "anchor": e.anchor, "description": e.description} for k, e in CATALOG.items()]
        )
        print(render(df, cfg.format))
        return 0

    if not args.id:
        raise BadParams(f"'instances {action}' needs an instance id")
    inst = generate(args.id, **_parse_params(args.param))
    if action == "emit":
        if inst.market is not None:
            payload = market_to_dict(inst.market)
        elif inst.distribution is not None:
            payload = distribution_to_dict(inst.distribution)
        else:
            payload = {"m": inst.envelope_target.m, "agents": [{"values": inst.envelope_target.to_strings()}]}
        text = json.dumps(payload, indent=2) + "\n"
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
            print(f"Saved: {args.output}")
        else:
            print(text, end="")
        return 0

    report = verify_bound(inst, cfg.limits, strict=False, progress=cfg.format == "table")
    df = report.frame()
    print(render(df, cfg.format))
    if cfg.format == "table":
        banner(f"{inst.id}: {'PASS' if report.passed else 'FAIL'}")
    if cfg.archive:
        archive_report(df, inst.id, cfg.report_dir)
    return 0 if report.passed else 1


def cmd_bayes(cfg: RunConfig, args) -> int:
    if not args.dist:
        raise BadParams("'bayes' needs --dist")
    dist = load_distribution(args.dist)
    seed = None if args.exhaustive else cfg.require_seed()
    common = dict(
        samples=cfg.trials,
        seed=seed,
        order=args.order_mode,
        exhaustive=args.exhaustive,
        max_agents=cfg.max_agents,
    )
    if args.construction == "xos":
        prices, est = bayes_uniform_xos(dist, **common)
    elif args.construction == "subadditive":
        prices, est = bayes_uniform_subadditive(dist, **common)
    else:
        prices, est = bayes_prices_c_close(dist, to_rational(args.c), **common)
    if cfg.format == "table" and not args.exhaustive:
        print_header(cfg, distribution=dist.name, construction=args.construction)
    _emit(
        cfg,
        {
            "prices": str(prices),
            "expected_opt": est.expected_opt,
            "expected_welfare": est.expected_welfare,
            "ratio": est.ratio,
            "opt_stderr": est.opt_stderr,
            "welfare_stderr": est.welfare_stderr,
            "samples": est.samples,
            "exhaustive": est.exhaustive,
        },
    )
    return 0


COMMANDS = {
    "opt": cmd_opt,
    "worst": cmd_worst,
    "simulate": cmd_simulate,
    "scheme": cmd_scheme,
    "verify": cmd_verify,
    "instances": cmd_instances,
    "bayes": cmd_bayes,
}


# -----------------------
# Parser
# -----------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pricing", description="Posted prices in multi-unit markets")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=FORMATS, default=None)
        p.add_argument("--max-n", type=int, default=None, help="cap on agents for exhaustive search")

    def market_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("-i", "--input", required=True, help="market file (.market.json)")
        p.add_argument("--closure", action="store_true", help="replace non-monotone values by their running max")

    p = sub.add_parser("opt", help="optimal welfare and an optimal allocation")
    market_args(p)
    p.add_argument("--naive", action="store_true", help="cross-check against enumeration")
    common(p)

    p = sub.add_parser("worst", help="adversarial welfare of a static pricing")
    market_args(p)
    p.add_argument("-p", "--prices", required=True, help="prices file (.prices.json)")
    p.add_argument("--order", default=None, help="fixed arrival order a,b,c")
    p.add_argument("--ties", choices=("adversarial", "canonical"), default="adversarial")
    p.add_argument("--naive", action="store_true", help="cross-check against enumeration")
    common(p)

    p = sub.add_parser("simulate", help="replay one arrival sequence")
    market_args(p)
    p.add_argument("-p", "--prices", required=True)
    p.add_argument("--order", default=None)
    p.add_argument("--choices", default=None, help="quantity bought at each step, a,b,c")
    common(p)

    p = sub.add_parser("scheme", help="run a pricing scheme and its adversarial evaluation")
    market_args(p)
    p.add_argument("--scheme", required=True, choices=list(SCHEMES))
    p.add_argument("--order", default=None, help="arrival order for known-order pricing")
    common(p)

    p = sub.add_parser("verify", help="randomized or catalog verification suite")
    p.add_argument("--suite", required=True, choices=list(SUITES))
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--n", type=int, default=None, help="largest agent count; each trial draws n from 1..N")
    p.add_argument("--m", type=int, default=None, help="largest item count; each trial draws m from 1..M")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--archive", action="store_true")
    common(p)

    p = sub.add_parser("instances", help="named constructions")
    p.add_argument("action", choices=("list", "emit", "verify"))
    p.add_argument("id", nargs="?", default=None)
    p.add_argument("--param", action="append", help="key=value, repeatable")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--archive", action="store_true")
    common(p)

    p = sub.add_parser("bayes", help="uniform prices for a valuation distribution")
    p.add_argument("--dist", required=True, help="distribution file (.dist.json)")
    p.add_argument("--construction", choices=("xos", "c-close", "subadditive"), default="xos")
    p.add_argument("--c", default="2", help="closeness factor for c-close")
    p.add_argument("--trials", type=int, default=200, help="Monte Carlo samples")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--exhaustive", action="store_true", help="exact expectation over the support")
    p.add_argument("--order-mode", choices=("adversarial", "identity"), default="adversarial")
    common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg, args)
    except PricingError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
