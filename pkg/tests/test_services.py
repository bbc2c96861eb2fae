from __future__ import annotations

import io
import json
from pathlib import Path

import numpy as np
import pytest
from rich.console import Console

from ncuncertainty import __version__
from ncuncertainty.core.config import RunConfig, load_config_file, resolve_threads
from ncuncertainty.core.errors import NcuError
from ncuncertainty.core.models import GridSpec
from ncuncertainty.services.reporting import build_report, csv_text, dumps_report, write_csv, write_json
from ncuncertainty.services.runs import new_run_dir, runs_base_dir
from ncuncertainty.services.selftest import CHECKS, run_selftest


@pytest.fixture
def cfg():
    return RunConfig(subcommand="constants", theta=0.2, eta=0.2, epsilon=0.1, grid=GridSpec(64, 64, 8.0, 8.0))


def test_report_envelope(cfg):
    report = build_report(cfg, "constants", {"z": 1 + 2j, "arr": np.arange(3), "bad": float("nan")})
    assert set(report) == {"kind", "version", "config", "result"}
    assert report["version"] == __version__
    assert report["config"]["grid"]["n1"] == 64
    assert report["result"] == {"z": {"re": 1.0, "im": 2.0}, "arr": [0, 1, 2], "bad": "nan"}
    text = dumps_report(report)
    assert text.index('"config"') < text.index('"kind"') < text.index('"result"')
    json.loads(text)


def test_write_json_to_stdout_and_file(cfg, capsys, tmp_path):
    report = build_report(cfg, "constants", {"value": 1.5})
    assert write_json(report) is None
    assert json.loads(capsys.readouterr().out)["result"]["value"] == 1.5
    path = write_json(report, tmp_path / "out" / "r.json")
    assert path.exists()
    assert json.loads(path.read_text(encoding="utf-8"))["kind"] == "constants"


def test_csv_output(tmp_path):
    rows = [{"a": 1e-2, "product": 0.3}, {"a": 1e-3, "product": 0.1}]
    assert csv_text(rows).splitlines() == ["a,product", "0.01,0.3", "0.001,0.1"]
    path = write_csv(rows, tmp_path / "t.csv")
    assert path.read_text(encoding="utf-8") == csv_text(rows)
    assert csv_text([]) == ""


def test_run_config_round_trip(cfg):
    again = RunConfig.from_dict(cfg.to_dict())
    assert again == cfg


def test_config_file_loading(tmp_path):
    assert load_config_file(None) == {}
    assert load_config_file(tmp_path / "missing.yaml") == {}
    p = tmp_path / "c.yaml"
    p.write_text("theta: 0.3\ngrid: 64\n", encoding="utf-8")
    assert load_config_file(p) == {"theta": 0.3, "grid": 64}
    bad = tmp_path / "c.json"
    bad.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(NcuError):
        load_config_file(bad)


def test_thread_resolution(monkeypatch):
    monkeypatch.delenv("NCU_THREADS", raising=False)
    assert resolve_threads(None, {}) == 1
    monkeypatch.setenv("NCU_THREADS", "3")
    assert resolve_threads(None, {}) == 3
    assert resolve_threads(None, {"threads": 2}) == 2
    assert resolve_threads(4, {"threads": 2}) == 4
    monkeypatch.setenv("NCU_THREADS", "many")
    with pytest.raises(NcuError):
        resolve_threads(None, {})


def test_run_directories(tmp_path, monkeypatch):
    monkeypatch.setattr("ncuncertainty.services.runs.now_stamp", lambda: "20260101_000000")
    assert runs_base_dir() == runs_base_dir({})
    assert runs_base_dir({"runs_dir": str(tmp_path)}) == tmp_path
    first = new_run_dir(tmp_path)
    second = new_run_dir(tmp_path)
    assert first.is_dir() and second.is_dir()
    assert first.name == "20260101_000000"
    assert second.name == "20260101_000000_1"


def test_selftest_subset_writes_run_record(tmp_path):
    console = Console(file=io.StringIO(), width=100)
    report = run_selftest(0, only=["constants", "vanishing_commutator"], runs_dir=tmp_path, console=console)
    assert [c.name for c in report.checks] == ["constants", "vanishing_commutator"]
    assert report.passed
    saved = json.loads((Path(report.run_dir) / "selftest.json").read_text(encoding="utf-8"))
    assert saved["passed"] is True
    assert saved["checks"][0]["details"]["max_defect"] <= 1e-12
    assert "constants" in console.file.getvalue()


def test_selftest_check_names_are_unique():
    names = [name for name, _, _ in CHECKS]
    assert len(names) == len(set(names))
    assert [name for name, _, gating in CHECKS if not gating] == ["coherent_states"]
