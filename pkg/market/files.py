from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from market.model import Market
from valuations.errors import DomainError, ParseError
from valuations.symmetric import make_valuation, monotone_closure

MARKET_SUFFIX = ".market.json"


def market_from_dict(data: dict[str, Any], closure: bool = False) -> Market:
    """
    {"m": int, "agents": [{"values": ["0", "3/2", ...]}, ...]}.
    With closure=True non-monotone vectors are replaced by their running max.
    """
    try:
        m = int(data["m"])
        raw_agents = data.get("agents", [])
        agents = []
        for entry in raw_agents:
            values = entry["values"] if isinstance(entry, dict) else entry
            agents.append(monotone_closure(values) if closure else make_valuation(values))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"Malformed market: {e}") from e
    try:
        return Market(m, tuple(agents))
    except DomainError as e:
        raise ParseError(str(e)) from e


def market_to_dict(market: Market) -> dict[str, Any]:
    return {"m": market.m, "agents": [{"values": v.to_strings()} for v in market.agents]}


def load_market(path: Path | str, closure: bool = False) -> Market:
    p = Path(path)
    if not p.exists():
        raise ParseError(f"Missing market file: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"{p}: not valid JSON ({e})") from e
    return market_from_dict(data, closure=closure)


def save_market(market: Market, path: Path | str) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(market_to_dict(market), indent=2) + "\n")
    return p
