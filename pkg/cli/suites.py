from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import Pool
from typing import Any, Callable

import numpy as np
import pandas as pd
from tqdm import tqdm

from bayesian.distributions import AgentDistribution, SupportPoint, ValuationDistribution, point_mass
from bayesian.estimates import bayes_uniform_subadditive, bayes_uniform_xos
from instances.catalog import CATALOG, ENVELOPE_GAP, generate
from instances.random_markets import GENERATORS, random_market, random_subadditive, random_submodular, random_xos
from instances.verify import verify_bound
from market.model import Market
from market.welfare import brute_force_optimal_welfare, optimal_welfare
from pricing.schemes import Limits, run_scheme
from simulator.prices import price_vector
from simulator.search import naive_worst_case, worst_case_welfare
from valuations.envelopes import (
    closeness_factor,
    minimal_submodular_envelope,
    minimal_xos_envelope,
    submodular_envelope_by_formula,
)
from valuations.errors import UnknownId
from valuations.symmetric import SymmetricValuation, is_submodular, is_xos

COLUMNS = ["suite", "trial", "n", "m", "opt", "welfare", "guarantee", "ratio", "ok", "detail"]


@dataclass(frozen=True)
class TrialTask:
    suite: str
    trial: int
    n: int
    m: int
    seed: int
    limits: Limits


def _rng(task: TrialTask) -> np.random.Generator:
    return np.random.default_rng([task.seed, task.trial])


def _row(task: TrialTask, ok: bool, opt=None, welfare=None, guarantee=None, detail: str = "") -> dict[str, Any]:
    ratio = welfare / opt if welfare is not None and opt else None
    return {
        "suite": task.suite,
        "trial": task.trial,
        "n": task.n,
        "m": task.m,
        "opt": opt,
        "welfare": welfare,
        "guarantee": guarantee,
        "ratio": float(ratio) if ratio is not None else None,
        "ok": bool(ok),
        "detail": detail,
    }


# -----------------------
# Trials
# -----------------------
def _oracle_trial(task: TrialTask) -> dict[str, Any]:
    rng = _rng(task)
    kinds = list(GENERATORS)
    kind = kinds[task.trial % len(kinds)]
    market = random_market(rng, kind, task.n, task.m)
    prices = price_vector(int(x) for x in rng.integers(0, 8, size=task.m))
    fast = worst_case_welfare(market, prices, max_agents=None, max_items=None).welfare
    slow = naive_worst_case(market, prices)
    opt, _ = optimal_welfare(market)
    ok = fast == slow and opt == brute_force_optimal_welfare(market)
    return _row(task, ok, opt, fast, detail=f"{kind} naive={slow}")


def _scheme_trial(scheme_id: str, kind: str) -> Callable[[TrialTask], dict[str, Any]]:
    def run(task: TrialTask) -> dict[str, Any]:
        market = random_market(_rng(task), kind, task.n, task.m)
        res = run_scheme(scheme_id, market, limits=task.limits)
        detail = res.chosen_candidate.label + (" (fallback)" if res.fallback else "")
        return _row(task, res.meets_guarantee, res.opt, res.welfare, res.guarantee, detail)

    return run


def _identical_pair_trial(task: TrialTask) -> dict[str, Any]:
    v = random_subadditive(_rng(task), task.m)
    market = Market(task.m, (v, v))
    res = run_scheme("subadd-2iden", market, limits=task.limits)
    return _row(task, res.meets_guarantee, res.opt, res.welfare, res.guarantee, res.chosen_candidate.label)


def _random_upper_bounds(rng: np.random.Generator, v: SymmetricValuation, tries: int = 8) -> list[SymmetricValuation]:
    out = []
    for _ in range(tries):
        u = random_submodular(rng, v.m)
        lift = max((v(i) - u(i) for i in range(v.m + 1)), default=Fraction(0))
        # raise every marginal by the largest shortfall
        if lift > 0:
            marg = [d + lift for d in u.marginals()]
            u = SymmetricValuation(tuple(sum(marg[:i], start=Fraction(0)) for i in range(v.m + 1)))
        if all(u(i) >= v(i) for i in range(v.m + 1)):
            out.append(u)
    return out


def _envelope_trial(task: TrialTask) -> dict[str, Any]:
    rng = _rng(task)
    kind = ("subadditive", "xos", "general")[task.trial % 3]
    v = random_market(rng, kind, 1, task.m).agents[0]
    w = minimal_submodular_envelope(v)
    x = minimal_xos_envelope(v)
    checks = {
        "submodular": is_submodular(w),
        "dominates": all(w(i) >= v(i) and x(i) >= v(i) for i in range(v.m + 1)),
        "idempotent": minimal_submodular_envelope(w) == w and minimal_xos_envelope(x) == x,
        "formula": submodular_envelope_by_formula(v) == w,
        "xos": is_xos(x),
        "minimal": all(
            all(u(i) >= w(i) for i in range(v.m + 1)) for u in _random_upper_bounds(rng, v)
        ),
    }
    if kind == "subadditive":
        checks["closeness<=2"] = closeness_factor(v, x) <= 2
    failed = [k for k, ok in checks.items() if not ok]
    return _row(task, not failed, detail=kind + (" failed: " + ",".join(failed) if failed else ""))


def _xos_distribution(rng: np.random.Generator, n: int, m: int) -> ValuationDistribution:
    # at most 4 profiles: the first two agents get two support points each
    agents = []
    for idx in range(n):
        if idx < 2:
            p = Fraction(int(rng.integers(1, 4)), 4)
            agents.append(
                AgentDistribution((SupportPoint(p, random_xos(rng, m)), SupportPoint(1 - p, random_xos(rng, m))))
            )
        else:
            agents.append(AgentDistribution((SupportPoint(Fraction(1), random_xos(rng, m)),)))
    return ValuationDistribution(m, tuple(agents), name="random-xos")


def _bayes_trial(task: TrialTask) -> dict[str, Any]:
    rng = _rng(task)
    dist = _xos_distribution(rng, task.n, task.m)
    _, est = bayes_uniform_xos(dist, 0, None, order="identity", exhaustive=True, max_agents=task.limits.max_agents)
    ok = est.expected_welfare >= est.expected_opt / 2

    pm = point_mass(random_market(rng, "subadditive", task.n, task.m))
    _, exact = bayes_uniform_subadditive(pm, 0, None, order="identity", exhaustive=True)
    ok = ok and exact.expected_welfare >= exact.expected_opt / 4
    # every draw of a point mass is the same profile, so sampling must match exactly
    _, sampled = bayes_uniform_subadditive(pm, 3, task.seed, order="identity")
    same = (sampled.expected_opt, sampled.expected_welfare) == (exact.expected_opt, exact.expected_welfare)
    return _row(
        task,
        ok and same,
        est.expected_opt,
        est.expected_welfare,
        Fraction(1, 2),
        detail=f"subadditive point mass {exact.expected_welfare}/{exact.expected_opt}",
    )


TRIALS: dict[str, Callable[[TrialTask], dict[str, Any]]] = {
    "oracle": _oracle_trial,
    "submod23": _scheme_trial("submod23", "submodular"),
    "submod57": _scheme_trial("submod57", "submodular"),
    "known-order": _scheme_trial("known-order", "submodular"),
    "dynamic-submod": _scheme_trial("dynamic-submod", "submodular"),
    "uniform-half": _scheme_trial("uniform-half", "submodular"),
    "subadd13": _scheme_trial("subadd13", "subadditive"),
    "subadd-2iden": _identical_pair_trial,
    "general-1m": _scheme_trial("general-1m", "general"),
    "general-best-order": _scheme_trial("general-best-order", "general"),
    "envelopes": _envelope_trial,
    "bayes": _bayes_trial,
}

# largest (n, m) when not given on the command line
DEFAULT_SIZES: dict[str, tuple[int, int]] = {
    "oracle": (4, 5),
    "submod57": (5, 10),
    "bayes": (2, 4),
    "envelopes": (1, 10),
    "subadd-2iden": (2, 8),
    "general-best-order": (3, 6),
}
FIXED_N = {"envelopes": 1, "subadd-2iden": 2}
MIN_M = {"submod57": 7}
SIZE_STREAM = 1

SUITES = tuple(TRIALS) + ("counterexamples",)


def run_trial(task: TrialTask) -> dict[str, Any]:
    return TRIALS[task.suite](task)


def _trial_size(suite: str, trial: int, seed: int, n: int | None, m: int | None) -> tuple[int, int]:
    """n in [1, N] and m in [1, M], drawn per trial; --n/--m set N and M."""
    dn, dm = DEFAULT_SIZES.get(suite, (5, 8))
    max_n = dn if n is None else n
    lo_m = MIN_M.get(suite, 1)
    max_m = max(dm if m is None else m, lo_m)
    rng = np.random.default_rng([seed, trial, SIZE_STREAM])
    draw_n = int(rng.integers(1, max(max_n, 1) + 1))
    draw_m = int(rng.integers(lo_m, max_m + 1))
    return FIXED_N.get(suite, draw_n), draw_m


def _instance_size(inst) -> tuple[int, int]:
    if inst.market is not None:
        return inst.market.n, inst.market.m
    if inst.distribution is not None:
        return inst.distribution.n, inst.distribution.m
    return 1, inst.envelope_target.m


def _counterexample_row(instance_id: str) -> dict[str, Any]:
    inst = generate(instance_id)
    n, m = _instance_size(inst)
    report = verify_bound(inst, strict=False)
    worst = report.max_ratio
    kind = "tightness" if inst.bound_kind == ENVELOPE_GAP else inst.bound_kind
    return {
        "suite": "counterexamples",
        "trial": instance_id,
        "n": n,
        "m": m,
        "opt": inst.opt,
        "welfare": inst.welfare_cap,
        "guarantee": inst.claimed_bound,
        "ratio": float(worst) if worst is not None else None,
        "ok": report.passed,
        "detail": f"{kind}, {len(report.rows)} checks",
    }


def run_suite(
    suite: str,
    trials: int,
    seed: int,
    n: int | None = None,
    m: int | None = None,
    limits: Limits = Limits(),
    jobs: int = 1,
    progress: bool = True,
) -> pd.DataFrame:
    """One row per trial, sorted by trial index whatever the worker count."""
    if suite == "counterexamples":
        ids = list(CATALOG)
        rows = _map(_counterexample_row, ids, jobs, progress, suite)
        return pd.DataFrame(rows, columns=COLUMNS)
    if suite not in TRIALS:
        raise UnknownId(f"Unknown suite '{suite}'. Known: {', '.join(SUITES)}")
    tasks = [TrialTask(suite, t, *_trial_size(suite, t, seed, n, m), seed=seed, limits=limits) for t in range(trials)]
    rows = _map(run_trial, tasks, jobs, progress, suite)
    return pd.DataFrame(rows, columns=COLUMNS)


def _map(fn, items: list, jobs: int, progress: bool, desc: str) -> list[dict[str, Any]]:
    if jobs > 1:
        with Pool(jobs) as pool:
            return list(tqdm(pool.imap(fn, items), total=len(items), desc=desc, disable=not progress))
    return [fn(x) for x in tqdm(items, desc=desc, disable=not progress)]
