from __future__ import annotations

import json
import subprocess
import sys

import pytest

from dyber import ENGINE_VERSION, UsageError
from dyber.cli import main
from dyber.report import emit, run
from dyber.suites import REGISTRY, SuiteConfig


def _run_cli(tmp_path, *args, name="r.json"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out.read_bytes()


@pytest.mark.parametrize(
    "args",
    [
        ["--m", "2", "--n", "1", "--suite", "delta-sl"],
        ["--m", "1", "--n", "1", "-N", "0"],
        ["--m", "1", "--n", "1", "-H", "0"],
        ["--m", "1", "--n", "1", "-N", "3", "--cap", "3"],
        ["--m", "0", "--n", "0"],
        ["--m", "1", "--n", "1", "--jobs", "0"],
    ],
)
def test_usage_errors_exit_2(args, capsys):
    assert main(args) == 2
    assert "dyber: error:" in capsys.readouterr().err


def test_unknown_suite_is_argparse_error():
    with pytest.raises(SystemExit) as e:
        main(["--m", "1", "--n", "1", "--suite", "bogus"])
    assert e.value.code == 2


def test_schema_and_exit_0(tmp_path):
    code, data = _run_cli(tmp_path, "--m", "1", "--n", "0", "--suite", "gauss", "--suite", "centrality")
    assert code == 0
    rep = json.loads(data)
    assert set(rep) == {"engine_version", "config", "suites", "identities", "summary"}
    assert rep["engine_version"] == ENGINE_VERSION
    assert rep["config"] == {"m": 1, "n": 0, "series_order": 2, "h_order": 2, "cap": 10, "suites": ["gauss", "centrality"], "seed": 0}
    assert [s["name"] for s in rep["suites"]] == ["gauss", "centrality"]
    rec = rep["identities"][0]
    assert {"suite", "label", "anchor", "params", "passed", "counterexample"} <= set(rec)
    assert "wall_time" not in rec
    assert rep["summary"]["passed"] == rep["summary"]["total"] == len(rep["identities"])


def test_suite_order_follows_registry(tmp_path):
    code, data = _run_cli(tmp_path, "--m", "1", "--n", "0", "--suite", "independence", "--suite", "gauss")
    assert [s["name"] for s in json.loads(data)["suites"]] == ["gauss", "independence"]


def test_default_suites():
    assert SuiteConfig(1, 1, 2, 2).selected() == list(REGISTRY)
    assert "delta-sl" not in SuiteConfig(2, 1, 2, 2).selected()


def test_empty_suite_list_gives_empty_report():
    rep = run(SuiteConfig(1, 1, 2, 2, suites=()))
    assert rep["identities"] == [] and rep["suites"] == []
    assert rep["summary"] == {"total": 0, "passed": 0, "failed": 0, "all_passed": True}
    assert emit(rep, "json") == emit(rep, "json")


def test_same_config_twice_is_byte_identical(tmp_path):
    args = ["--m", "1", "--n", "1", "--suite", "confluence", "--suite", "zeta", "--seed", "3"]
    _, a = _run_cli(tmp_path, *args, name="a.json")
    _, b = _run_cli(tmp_path, *args, name="b.json")
    assert a == b


def test_jobs_do_not_change_the_report(tmp_path):
    args = ["--m", "1", "--n", "1", "--suite", "relations-oracle", "--suite", "gauss", "--suite", "d-commute"]
    _, a = _run_cli(tmp_path, *args, "--jobs", "1", name="a.json")
    _, b = _run_cli(tmp_path, *args, "--jobs", "3", name="b.json")
    assert a == b


def test_timings_are_opt_in(tmp_path):
    _, data = _run_cli(tmp_path, "--m", "1", "--n", "0", "--suite", "gauss", "--timings")
    assert all("wall_time" in r for r in json.loads(data)["identities"])


def test_text_format(tmp_path):
    code, data = _run_cli(tmp_path, "--m", "1", "--n", "1", "--suite", "gauss", "--format", "text")
    text = data.decode()
    assert code == 0
    assert text.splitlines()[0].startswith(ENGINE_VERSION)
    assert "gauss_fde" in text and text.rstrip().endswith("passed")


def test_cache_dir_roundtrip_and_stale(tmp_path):
    cache = tmp_path / "cache"
    args = ["--m", "1", "--n", "1", "--suite", "gauss", "--cache-dir", str(cache)]
    code, first = _run_cli(tmp_path, *args, name="a.json")
    assert code == 0 and (cache / "rules_gl1_1.txt").exists()
    code, second = _run_cli(tmp_path, *args, name="b.json")
    assert code == 0 and first == second
    assert main([*args, "-H", "3"]) == 2


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "dyber", "--m", "1", "--n", "0", "-N", "1", "-H", "1", "--suite", "gauss", "--format", "text"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0, res.stderr
    assert "total:" in res.stdout


def test_config_validation_direct():
    with pytest.raises(UsageError):
        SuiteConfig(1, 1, 2, 2, suites=("nope",))
    with pytest.raises(UsageError):
        SuiteConfig(1, 1, 2, 2, fmt="xml")
