import json

import pandas as pd
import pytest

import cli.config
from cli.main import main
from cli.reporting import archive_report, render
from cli.suites import run_suite
from market.files import save_market
from simulator.prices import save_prices, uniform_prices


@pytest.fixture
def prelim_file(tmp_path, prelim_market):
    return str(save_market(prelim_market, tmp_path / "prelim.market.json"))


@pytest.fixture
def intro_files(tmp_path, intro_market):
    market = save_market(intro_market, tmp_path / "intro.market.json")
    prices = save_prices(uniform_prices(4, 3), tmp_path / "four.prices.json")
    return str(market), str(prices)


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_opt(prelim_file, capsys):
    assert main(["opt", "-i", prelim_file, "--naive", "--format", "json"]) == 0
    out = _json(capsys)
    assert out["opt"] == "11"
    assert out["brute_force"] == "11"


def test_opt_table(prelim_file, capsys):
    assert main(["opt", "-i", prelim_file]) == 0
    assert "opt: 11" in capsys.readouterr().out


def test_worst_agrees_with_enumeration(intro_files, capsys):
    market, prices = intro_files
    assert main(["worst", "-i", market, "-p", prices, "--naive", "--format", "json"]) == 0
    out = _json(capsys)
    assert out["welfare"] == "10"
    assert out["agree"] is True


def test_simulate_replays_ties(intro_files, capsys):
    market, prices = intro_files
    assert main(["simulate", "-i", market, "-p", prices, "--choices", "2,1", "--format", "json"]) == 0
    out = _json(capsys)
    assert out["welfare"] == "14"
    assert out["allocation"] == [2, 1]


def test_scheme(prelim_file, capsys):
    assert main(["scheme", "-i", prelim_file, "--scheme", "submod23", "--format", "json"]) == 0
    out = _json(capsys)
    assert out["welfare"] == "9"
    assert out["meets_guarantee"] is True


def test_instances_list_and_emit(tmp_path, capsys):
    assert main(["instances", "list", "--format", "json"]) == 0
    ids = {row["id"] for row in _json(capsys)}
    assert "submod_0802" in ids

    target = tmp_path / "two.market.json"
    assert main(["instances", "emit", "submod_2item", "-o", str(target)]) == 0
    assert json.loads(target.read_text())["m"] == 2


def test_instances_verify_with_params(capsys):
    assert main(["instances", "verify", "subadd_23_identical", "--param", "m=6", "--format", "json"]) == 0
    rows = _json(capsys)
    assert rows and all(r["ok"] for r in rows)


def test_verify_suite(capsys):
    code = main(["verify", "--suite", "oracle", "--trials", "3", "--n", "2", "--m", "3", "--seed", "5", "--format", "json"])
    rows = _json(capsys)
    assert code == 0
    assert [r["trial"] for r in rows] == [0, 1, 2]


def test_verify_needs_a_seed(monkeypatch, capsys):
    monkeypatch.setattr(cli.config, "SEED", None)
    assert main(["verify", "--suite", "oracle", "--trials", "1"]) == 1
    assert "--seed" in capsys.readouterr().err


def test_suite_is_deterministic():
    a = run_suite("submod23", 4, seed=11, n=2, m=4, progress=False)
    b = run_suite("submod23", 4, seed=11, n=2, m=4, progress=False)
    pd.testing.assert_frame_equal(a, b)
    assert a["ok"].all()


def test_missing_file_is_an_error(tmp_path, capsys):
    assert main(["opt", "-i", str(tmp_path / "nope.json")]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_archive_report(tmp_path, capsys):
    df = pd.DataFrame([{"check": "x", "ok": True, "_private": 1}])
    folder = archive_report(df, "demo", tmp_path)
    assert (folder / "demo.csv").exists()
    assert json.loads((folder / "demo.json").read_text()) == [{"check": "x", "ok": True}]
    assert "Saved:" in capsys.readouterr().out
    assert render(df.iloc[0:0]) == "(no rows)"


def test_suite_sizes_are_drawn_up_to_the_maxima():
    df = run_suite("uniform-half", 30, seed=4, n=3, m=4, progress=False)
    assert df["n"].between(1, 3).all() and df["m"].between(1, 4).all()
    assert df["m"].nunique() > 1
    assert df["ok"].all()
    wide = run_suite("submod57", 5, seed=4, progress=False)
    assert wide["m"].between(7, 10).all()
