from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

from pricing.schemes import Limits
from valuations.errors import BadParams

load_dotenv()


def _env_int(name: str, default: int | None) -> int | None:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise BadParams(f"{name} must be an integer, got '{raw}'") from e


MAX_AGENTS = _env_int("PRICING_MAX_AGENTS", 12)
MAX_ITEMS = _env_int("PRICING_MAX_ITEMS", 64)
MAX_ORDER_AGENTS = _env_int("PRICING_MAX_ORDER_AGENTS", 8)
SEED = _env_int("PRICING_SEED", None)
FORMAT = os.getenv("PRICING_FORMAT", "table")
REPORT_DIR = Path(os.getenv("PRICING_REPORT_DIR", "data/reports"))

FORMATS = ("table", "json")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Path | None = None
    prices: Path | None = None
    scheme: str | None = None
    order: tuple[int, ...] | None = None
    ties: str = "adversarial"
    suite: str | None = None
    trials: int = 200
    n: int | None = None
    m: int | None = None
    seed: int | None = None
    max_agents: int | None = MAX_AGENTS
    max_items: int | None = MAX_ITEMS
    max_order_agents: int | None = MAX_ORDER_AGENTS
    format: str = FORMAT
    archive: bool = False
    closure: bool = False
    naive: bool = False
    jobs: int = 1
    report_dir: Path = REPORT_DIR

    @property
    def limits(self) -> Limits:
        return Limits(self.max_agents, self.max_items, self.max_order_agents)

    def require_seed(self) -> int:
        if self.seed is None:
            raise BadParams("This command is randomized: pass --seed or set PRICING_SEED")
        return self.seed


def parse_order(spec: str | None) -> tuple[int, ...] | None:
    if spec is None or spec.strip() == "":
        return None
    try:
        return tuple(int(x) for x in spec.split(","))
    except ValueError as e:
        raise BadParams(f"--order expects comma-separated agent indices, got '{spec}'") from e


def config_from_args(args) -> RunConfig:
    """Flags over .env defaults; caps and counts are checked before any search."""
    get = lambda name, default=None: getattr(args, name, default)  # noqa: E731
    cfg = RunConfig(
        command=args.command,
        input=Path(args.input) if get("input") else None,
        prices=Path(args.prices) if get("prices") else None,
        scheme=get("scheme"),
        order=parse_order(get("order")),
        ties=get("ties") or "adversarial",
        suite=get("suite"),
        trials=get("trials") if get("trials") is not None else 200,
        n=get("n"),
        m=get("m"),
        seed=get("seed") if get("seed") is not None else SEED,
        max_agents=get("max_n") if get("max_n") is not None else MAX_AGENTS,
        max_items=MAX_ITEMS,
        max_order_agents=MAX_ORDER_AGENTS,
        format=get("format") or FORMAT,
        archive=bool(get("archive", False)),
        closure=bool(get("closure", False)),
        naive=bool(get("naive", False)),
        jobs=get("jobs") or 1,
        report_dir=REPORT_DIR,
    )
    if cfg.format not in FORMATS:
        raise BadParams(f"--format must be one of {', '.join(FORMATS)}, got '{cfg.format}'")
    for name in ("max_agents", "max_items", "max_order_agents"):
        cap = getattr(cfg, name)
        if cap is not None and cap < 1:
            raise BadParams(f"{name} must be positive, got {cap}")
    if cfg.trials < 1:
        raise BadParams(f"--trials must be >= 1, got {cfg.trials}")
    if cfg.jobs < 1:
        raise BadParams(f"--jobs must be >= 1, got {cfg.jobs}")
    for name in ("n", "m"):
        val = getattr(cfg, name)
        if val is not None and val < 0:
            raise BadParams(f"--{name} must be non-negative, got {val}")
    return cfg
