from __future__ import annotations

import io
import json
import logging

import pytest

from ncuncertainty.core.errors import DomainError
from ncuncertainty.infra.logging import (
    PATTERN,
    TRACE_LEVEL,
    JSONFormatter,
    MDCFilter,
    get_unified_logger,
    init_logging,
    level_from_env,
    log_error,
    log_performance,
    mdc_clear,
    mdc_put,
)


@pytest.fixture
def captured():
    """A handler on the package logger that records into a buffer with the given formatter."""
    init_logging()
    buf = io.StringIO()
    handler = logging.StreamHandler(buf)
    handler.addFilter(MDCFilter())
    handler.setLevel(TRACE_LEVEL)
    root = logging.getLogger("ncuncertainty")
    old_level = root.level
    root.addHandler(handler)
    root.setLevel(TRACE_LEVEL)
    yield buf, handler
    root.removeHandler(handler)
    root.setLevel(old_level)
    mdc_clear()


@pytest.mark.parametrize(
    "value, level",
    [("TRACE", TRACE_LEVEL), ("warn", logging.WARNING), ("FATAL", logging.CRITICAL), ("debug", 10), ("loud", 30)],
)
def test_level_from_env(monkeypatch, value, level):
    monkeypatch.setenv("NCU_LOG_LEVEL", value)
    assert level_from_env() == level


def test_pattern_layout_carries_the_mdc(captured):
    buf, handler = captured
    handler.setFormatter(logging.Formatter(PATTERN))
    mdc_put("subcommand", "hpw")
    mdc_put("seed", 3)
    get_unified_logger("uncertainty", "hpw").info("sweep done")
    line = buf.getvalue().strip()
    assert "[ncuncertainty.uncertainty.hpw] sweep done" in line
    assert line.endswith("| subcommand=hpw seed=3")


def test_json_layout_and_error_code(captured):
    buf, handler = captured
    handler.setFormatter(JSONFormatter())
    mdc_put("run_id", "r1")
    try:
        raise DomainError("theta*eta must be < 1")
    except DomainError as e:
        log_error("cli", "constants", e)
    record = json.loads(buf.getvalue().splitlines()[0])
    assert record["level"] == "ERROR"
    assert record["error"] == "algebra.domain"
    assert record["mdc"] == {"run_id": "r1"}
    assert "Traceback" in record["exc_info"]


def test_unraised_error_has_no_traceback(captured):
    buf, handler = captured
    handler.setFormatter(JSONFormatter())
    log_error("services", "selftest", ValueError("bad"), context="entropic")
    record = json.loads(buf.getvalue())
    assert record["message"] == "entropic | ValueError: bad"
    assert "exc_info" not in record


def test_performance_event_is_json(captured):
    buf, handler = captured
    handler.setFormatter(logging.Formatter("%(message)s"))
    log_performance("wdw", "ode", "solve_zero_energy", 0.1234567, {"steps": 10})
    tag, payload = buf.getvalue().strip().split(" ", 1)
    assert tag == "[PERF]"
    assert json.loads(payload) == {"metric": "solve_zero_energy", "seconds": 0.123457, "steps": 10}


def test_file_appender_from_env(tmp_path, monkeypatch):
    log_file = tmp_path / "ncu.log"
    monkeypatch.setenv("NCU_LOG_FILE", str(log_file))
    monkeypatch.setenv("NCU_LOG_LEVEL", "INFO")
    try:
        init_logging(force=True)
        mdc_put("seed", 7)
        get_unified_logger("states", "io").info("state written")
        for h in logging.getLogger("ncuncertainty").handlers:
            h.flush()
        text = log_file.read_text(encoding="utf-8")
        assert "[INFO][ncuncertainty.states.io] state written | seed=7" in text
    finally:
        mdc_clear()
        monkeypatch.delenv("NCU_LOG_FILE")
        monkeypatch.delenv("NCU_LOG_LEVEL")
        init_logging(force=True)
