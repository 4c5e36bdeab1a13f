from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import pandas as pd

from valuations.rationals import format_rational


def _cell(x: Any) -> Any:
    if isinstance(x, Fraction):
        return format_rational(x)
    return x


def for_output(df: pd.DataFrame) -> pd.DataFrame:
    """Fractions become "n/d" strings; private columns (leading _) are dropped."""
    out = df[[c for c in df.columns if not str(c).startswith("_")]].copy()
    for col in out.columns:
        out[col] = out[col].map(_cell)
    return out


def render(df: pd.DataFrame, fmt: str = "table") -> str:
    out = for_output(df)
    if fmt == "json":
        return json.dumps(out.to_dict(orient="records"), indent=2, default=str)
    if out.empty:
        return "(no rows)"
    return out.to_string(index=False)


def banner(title: str) -> None:
    print("\n" + "=" * 60)
    print(title)
    print("=" * 60)


def print_header(cfg, **extra: Any) -> None:
    """Everything needed to rerun a randomized command."""
    banner(f"pricing {cfg.command}")
    fields = {
        "suite": cfg.suite,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "n": cfg.n,
        "m": cfg.m,
        "max_agents": cfg.max_agents,
        "max_items": cfg.max_items,
        "max_order_agents": cfg.max_order_agents,
        "jobs": cfg.jobs,
    }
    fields.update(extra)
    for key, val in fields.items():
        if val is not None:
            print(f"{key}: {val}")


def archive_report(
    df: pd.DataFrame,
    name: str,
    report_dir: Path,
    tz: str = "UTC",
) -> Path:
    """
    Writes the report into a dated folder:
      <report_dir>/YYYY-MM-DD/<name>.csv
      <report_dir>/YYYY-MM-DD/<name>.json
    """
    run_date = pd.Timestamp.now(tz=tz).date().isoformat()
    arch_dir = Path(report_dir) / run_date
    arch_dir.mkdir(parents=True, exist_ok=True)

    out = for_output(df)
    out.to_csv(arch_dir / f"{name}.csv", index=False)
    (arch_dir / f"{name}.json").write_text(
        json.dumps(out.to_dict(orient="records"), indent=2, default=str), encoding="utf-8"
    )

    print(f"Saved: {(arch_dir / f'{name}.csv').resolve()}")
    return arch_dir
