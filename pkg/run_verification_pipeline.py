from __future__ import annotations

import os
import subprocess
import sys
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

PY = sys.executable  # ensures venv python is used
SEED = os.getenv("PRICING_SEED", "42")
TRIALS = os.getenv("PRICING_TRIALS", "200")


def verify(suite: str, *extra: str) -> list[str]:
    return [PY, "-m", "cli", "verify", "--suite", suite, "--seed", SEED, "--trials", TRIALS, "--archive", *extra]


STEPS = [
    # --- search oracles ---
    ("Memoized worst case vs. enumeration", verify("oracle", "--n", "4", "--m", "5")),

    # --- submodular schemes ---
    ("Two-candidate pricing (2/3)", verify("submod23")),
    ("Four-candidate pricing (5/7 - 1/m)", verify("submod57")),
    ("Uniform pricing (1/2)", verify("uniform-half")),
    ("Known-order pricing (= OPT)", verify("known-order")),
    ("Dynamic pricing (= OPT)", verify("dynamic-submod")),

    # --- subadditive and general ---
    ("Subadditive uniform pricing (1/3)", verify("subadd13")),
    ("Two identical subadditive agents (2/3)", verify("subadd-2iden")),
    ("General valuations, any order (1/m)", verify("general-1m")),
    ("General valuations, chosen order (1/2)", verify("general-best-order")),

    # --- envelopes, Bayesian, named constructions ---
    ("Envelope properties", verify("envelopes")),
    ("Bayesian uniform prices", verify("bayes")),
    ("Named lower-bound constructions", verify("counterexamples")),
]


def run_step(title: str, cmd: list[str]) -> None:
    print("\n" + "=" * 60)
    print(f"{title}")
    print(f"$ {' '.join(cmd)}")
    print("=" * 60)

    result = subprocess.run(cmd, text=True)
    if result.returncode != 0:
        print("\nPIPELINE STOPPED")
        print(f"Failed step: {title}")
        print(f"Command: {' '.join(cmd)}")
        sys.exit(1)


def require(path: str) -> Path:
    p = Path(path)
    if not p.exists():
        print(f"\nMissing required file: {p}")
        sys.exit(1)
    return p


def main() -> None:
    print(f"\nUsing Python: {sys.executable}")

    require("cli/main.py")
    require("cli/suites.py")
    require("instances/catalog.py")

    print(f"\nRunning verification pipeline (seed {SEED}, {TRIALS} trials per suite)...\n")

    for title, cmd in STEPS:
        run_step(title, cmd)

    print("\n" + "=" * 60)
    print("PIPELINE COMPLETE")
    print(f"Reports: {os.getenv('PRICING_REPORT_DIR', 'data/reports')}/<date>/<suite>.csv|json")
    print("=" * 60 + "\n")


if __name__ == "__main__":
    main()
