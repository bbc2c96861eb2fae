from __future__ import annotations

import csv
import json

import pytest

from ncuncertainty.cli.common import UsageError, parse_floats, parse_range
from ncuncertainty.cli.main import build_parser, run

DEFORMED_FLAGS = ["--theta", "0.2", "--eta", "0.2", "--epsilon", "0.1"]


def _report(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_constants_report(capsys):
    assert run(["constants", *DEFORMED_FLAGS]) == 0
    report = _report(capsys)
    assert report["kind"] == "constants"
    assert report["passed"] is True
    assert report["result"]["lambda_"] == pytest.approx(0.994936, abs=1e-6)
    assert report["result"]["E"] == pytest.approx(0.019596, abs=1e-6)
    assert report["config"]["theta"] == 0.2


def test_domain_error_is_reported_as_json(capsys):
    assert run(["constants", "--theta", "2", "--eta", "1"]) == 1
    err = _report(capsys)
    assert err["error"] == "algebra.domain"
    assert err["details"] == {"theta": 2.0, "eta": 1.0}


def test_usage_errors_exit_one(capsys):
    assert run(["no-such-command"]) == 1
    assert run(["constants", "--grid", "many"]) == 1
    assert run(["--help"]) == 0
    assert run(["--version"]) == 0


def test_failed_check_exits_two(capsys):
    argv = ["wdw", "--kind", "constant", "--a", "-1", "--range", "0:60", "--tail", "5:60"]
    assert run([*argv, "--tol", "1e-30"]) == 2
    report = _report(capsys)
    assert report["passed"] is False
    assert report["result"]["envelope_exponent"] == pytest.approx(0.0, abs=1e-3)


def test_config_file_is_overridden_by_flags(tmp_path, capsys):
    conf = tmp_path / "run.yaml"
    conf.write_text("theta: 0.3\neta: 0.3\nepsilon: 0.05\ngrid: 64\nL: 8\n", encoding="utf-8")
    assert run(["constants", "--config", str(conf), "--theta", "0.2"]) == 0
    config = _report(capsys)["config"]
    assert config["theta"] == 0.2
    assert config["eta"] == 0.3
    assert config["grid"] == {"n1": 64, "n2": 64, "L1": 8.0, "L2": 8.0}


def test_hpw_writes_report_and_csv(tmp_path, capsys):
    out, table = tmp_path / "hpw.json", tmp_path / "hpw.csv"
    argv = ["hpw", "--theta", "0.6", "--eta", "0.6", "--epsilon", "0.1", "--a", "1e-6"]
    assert run([*argv, "--out", str(out), "--csv", str(table)]) == 0
    assert capsys.readouterr().out == ""
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["result"]["limit"] == pytest.approx(0.05)
    assert report["result"]["violates_hpw"] is True
    with table.open(encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 5
    assert float(rows[-1]["product"]) == pytest.approx(0.0509, abs=5e-4)


def test_wdw_minimum_and_tail(capsys):
    argv = ["wdw", *DEFORMED_FLAGS, "--kind", "canonical", "--a", "1", "--bracket", "0.5:4"]
    assert run([*argv, "--range", "0:60", "--tail", "20:60"]) == 0
    result = _report(capsys)["result"]
    assert result["minimum"]["x_min"] == pytest.approx(1.9, abs=0.05)
    assert result["envelope_exponent"] == pytest.approx(-0.5, abs=0.1)
    assert len(result["tail_l2"]["checkpoints"]) == 5


def test_state_round_trip_through_flags(tmp_path, capsys):
    state = tmp_path / "g.state"
    flags = [*DEFORMED_FLAGS, "--grid", "64", "--L", "10"]
    assert run(["dispersion", *flags, "--op", "X1", "--state-out", str(state)]) == 0
    first = _report(capsys)["result"]
    assert state.exists()
    assert run(["dispersion", *flags, "--op", "X1", "--state-in", str(state)]) == 0
    assert _report(capsys)["result"]["dispersion"] == pytest.approx(first["dispersion"])


def test_every_subcommand_is_registered():
    parser = build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    assert set(sub.choices) == {
        "constants",
        "commutators",
        "dispersion",
        "robertson",
        "minimize",
        "spectrum",
        "hpw",
        "minlength",
        "scaling",
        "entropy",
        "modnorm",
        "weights",
        "wdw",
        "probe-coherent",
        "selftest",
    }


def test_range_and_list_parsing():
    assert parse_range("20:inf") == (20.0, float("inf"))
    assert parse_floats("1e-2, 1e-3") == [1e-2, 1e-3]
    assert parse_floats("") is None
    with pytest.raises(UsageError):
        parse_range("20")
    with pytest.raises(UsageError):
        parse_floats("a,b")


def test_bad_config_value_is_a_usage_error(tmp_path, capsys):
    conf = tmp_path / "run.yaml"
    conf.write_text("theta: abc\n", encoding="utf-8")
    assert run(["constants", "--config", str(conf)]) == 1
    assert _report(capsys)["error"] == "cli.usage"


def test_unparsable_config_file(tmp_path, capsys):
    conf = tmp_path / "run.json"
    conf.write_text("{theta: ", encoding="utf-8")
    assert run(["constants", "--config", str(conf)]) == 1
    assert _report(capsys)["error"] == "config.format"


@pytest.mark.parametrize(
    "payload",
    [b"not a state file", b"[1, 2]\n", b'{"n1": 4}\n', b'{"n1": 4, "n2": 4, "L1": 1, "L2": 1}\n\x00\x01\x02'],
)
def test_malformed_state_file(tmp_path, capsys, payload):
    state = tmp_path / "bad.state"
    state.write_bytes(payload)
    assert run(["dispersion", *DEFORMED_FLAGS, "--op", "X1", "--state-in", str(state)]) == 1
    assert _report(capsys)["error"] == "states.format"


def test_missing_state_file(tmp_path, capsys):
    missing = tmp_path / "nowhere.state"
    assert run(["dispersion", *DEFORMED_FLAGS, "--op", "X1", "--state-in", str(missing)]) == 1
    assert _report(capsys)["error"] == "states.format"


def test_hpw_sweep_above_half_exits_two(capsys):
    argv = ["hpw", "--theta", "0.6", "--eta", "0.6", "--epsilon", "0.1", "--a-values", "1e4,1e3"]
    assert run(argv) == 2
    sweep = _report(capsys)["result"]["sweep"]
    assert sweep["decreasing"] is True
    assert sweep["below_half"] is False


def _without_timings(node):
    if isinstance(node, dict):
        return {k: _without_timings(v) for k, v in node.items() if k not in {"seconds", "duration", "run_dir"}}
    if isinstance(node, list):
        return [_without_timings(v) for v in node]
    return node


@pytest.mark.parametrize(
    "argv",
    [
        ["robertson", *DEFORMED_FLAGS, "--grid", "64", "--L", "10", "--state", "random", "--seed", "5"],
        ["weights", *DEFORMED_FLAGS, "--samples", "2000", "--seed", "5"],
    ],
)
def test_same_config_and_seed_give_same_report(capsys, argv):
    assert run(argv) in (0, 2)
    first = _report(capsys)
    assert run(argv) in (0, 2)
    second = _report(capsys)
    assert "result" in first
    assert _without_timings(first) == _without_timings(second)
