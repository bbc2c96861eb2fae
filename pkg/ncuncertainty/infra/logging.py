"""Logging for ncuncertainty, arranged after Log4j.

Loggers are named ``ncuncertainty.<module>.<component>`` (for example
``ncuncertainty.eigensolver.ground``). Every appender writes to stderr or a file; stdout
belongs to the JSON reports.

Environment (prefix NCU_), read once when logging is first configured:
- ``NCU_LOG_LEVEL``: TRACE, DEBUG, INFO, WARN, ERROR, FATAL (default WARNING)
- ``NCU_LOG_JSON``: 1 for one JSON object per record
- ``NCU_LOG_RICH``: 1 to render the console appender with rich
- ``NCU_LOG_FILE``: path of an extra pattern-layout file appender
"""

from __future__ import annotations

import contextvars
import json
import logging
import logging.config
import os
import sys
from typing import Any, Dict, Optional

TRACE_LEVEL = 5
logging.addLevelName(TRACE_LEVEL, "TRACE")


def _trace(self: logging.Logger, msg: str, *args: Any, **kwargs: Any) -> None:
    if self.isEnabledFor(TRACE_LEVEL):
        self._log(TRACE_LEVEL, msg, args, **kwargs)


if not hasattr(logging.Logger, "trace"):
    logging.Logger.trace = _trace  # type: ignore[attr-defined]


# ---------------- MDC ----------------

# run_id, subcommand and seed of the current CLI run
_MDC: contextvars.ContextVar[Dict[str, Any]] = contextvars.ContextVar("ncu_mdc", default={})


def mdc_put(key: str, value: Any) -> None:
    _MDC.set({**_MDC.get(), key: value})


def mdc_clear() -> None:
    _MDC.set({})


class MDCFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        ctx = _MDC.get()
        record.mdc = ctx
        record.mdc_suffix = (" | " + " ".join(f"{k}={v}" for k, v in ctx.items())) if ctx else ""
        return True


class JSONFormatter(logging.Formatter):
    """One JSON object per record; the MDC and the error code ride along when present."""

    def format(self, record: logging.LogRecord) -> str:
        payload: Dict[str, Any] = {
            "timestamp": self.formatTime(record, datefmt="%Y-%m-%dT%H:%M:%S%z"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        if getattr(record, "mdc", None):
            payload["mdc"] = record.mdc
        code = getattr(record, "error_code", None)
        if code:
            payload["error"] = code
        if record.exc_info:
            payload["exc_info"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False, default=str)


# ---------------- configuration ----------------

PATTERN = "[%(asctime)s][%(levelname)s][%(name)s] %(message)s%(mdc_suffix)s"
DATEFMT = "%Y-%m-%d %H:%M:%S"

_CONFIGURED = False


def _env_flag(name: str) -> bool:
    return os.getenv(name, "").strip().lower() in {"1", "true", "yes", "on"}


def level_from_env(name: str = "NCU_LOG_LEVEL", default: str = "WARNING") -> int:
    s = os.getenv(name, default).strip().upper()
    s = {"WARN": "WARNING", "FATAL": "CRITICAL"}.get(s, s)
    if s == "TRACE":
        return TRACE_LEVEL
    level = logging.getLevelName(s)
    return level if isinstance(level, int) else logging.WARNING


class StderrHandler(logging.StreamHandler):
    """Writes to whatever sys.stderr is at emit time."""

    def __init__(self) -> None:
        super().__init__(sys.stderr)

    @property
    def stream(self) -> Any:  # type: ignore[override]
        return sys.stderr

    @stream.setter
    def stream(self, value: Any) -> None:
        pass


def rich_stderr_handler() -> logging.Handler:
    from rich.console import Console
    from rich.logging import RichHandler

    return RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)


def build_logging_config() -> Dict[str, Any]:
    """dictConfig with a stderr appender and, if NCU_LOG_FILE is set, a file appender."""
    level = level_from_env()
    console: Dict[str, Any] = {"level": level, "filters": ["mdc"]}
    if _env_flag("NCU_LOG_RICH") and not _env_flag("NCU_LOG_JSON"):
        console["()"] = rich_stderr_handler
    else:
        console.update(
            {
                "()": StderrHandler,
                "formatter": "json" if _env_flag("NCU_LOG_JSON") else "pattern",
            }
        )
    handlers: Dict[str, Any] = {"console": console}
    log_file = os.getenv("NCU_LOG_FILE", "").strip()
    if log_file:
        handlers["file"] = {
            "class": "logging.FileHandler",
            "filename": log_file,
            "encoding": "utf-8",
            "level": level,
            "formatter": "pattern",
            "filters": ["mdc"],
        }
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "filters": {"mdc": {"()": MDCFilter}},
        "formatters": {
            "pattern": {"format": PATTERN, "datefmt": DATEFMT},
            "json": {"()": JSONFormatter},
        },
        "handlers": handlers,
        "loggers": {
            "ncuncertainty": {"level": level, "handlers": list(handlers), "propagate": False}
        },
    }


def init_logging(force: bool = False) -> None:
    """Configure the ``ncuncertainty`` logger tree once (again with ``force``)."""
    global _CONFIGURED
    if _CONFIGURED and not force:
        return
    try:
        logging.config.dictConfig(build_logging_config())
    except (ValueError, OSError) as e:
        # unusable NCU_LOG_FILE or handler spec: keep a plain stderr appender
        logging.basicConfig(level=level_from_env(), stream=sys.stderr)
        logging.getLogger("ncuncertainty").warning("logging config rejected: %s", e)
    _CONFIGURED = True


def get_unified_logger(module: str, component: str) -> logging.Logger:
    init_logging()
    return logging.getLogger(f"ncuncertainty.{module}.{component}".rstrip("."))


# ---------------- structured events ----------------


def _event(logger: logging.Logger, level: int, tag: str, payload: Dict[str, Any]) -> None:
    if logger.isEnabledFor(level):
        logger.log(level, "[%s] %s", tag, json.dumps(payload, ensure_ascii=False, default=str))


def log_task_start(module: str, component: str, details: Optional[Dict[str, Any]] = None) -> None:
    _event(get_unified_logger(module, component), logging.INFO, "TASK START", dict(details or {}))


def log_task_end(
    module: str, component: str, success: bool, details: Optional[Dict[str, Any]] = None
) -> None:
    payload = {"success": success, **(details or {})}
    _event(get_unified_logger(module, component), logging.INFO, "TASK END", payload)


def log_processing_step(
    module: str, component: str, message: str, details: Optional[Dict[str, Any]] = None
) -> None:
    logger = get_unified_logger(module, component)
    if details:
        _event(logger, logging.DEBUG, message, details)
    else:
        logger.debug("%s", message)


def log_error(module: str, component: str, error: BaseException, context: str = "") -> None:
    """Log ``error`` with its module-qualified code; the traceback only if it was raised."""
    code = getattr(error, "code", type(error).__name__)
    exc_info = (type(error), error, error.__traceback__) if error.__traceback__ else None
    prefix = f"{context} | " if context else ""
    get_unified_logger(module, component).error(
        "%s%s: %s", prefix, code, error, exc_info=exc_info, extra={"error_code": code}
    )


def log_performance(
    module: str, component: str, metric: str, seconds: float, details: Optional[Dict[str, Any]] = None
) -> None:
    payload = {"metric": metric, "seconds": round(float(seconds), 6), **(details or {})}
    _event(get_unified_logger(module, component), logging.INFO, "PERF", payload)


def log_file_operation(
    module: str,
    component: str,
    operation: str,
    file_path: str,
    file_size: int,
    duration: float,
    status: str,
    extra: Optional[Dict[str, Any]] = None,
) -> None:
    payload = {
        "operation": operation,
        "path": file_path,
        "bytes": file_size,
        "seconds": round(float(duration), 6),
        "status": status,
        **(extra or {}),
    }
    _event(get_unified_logger(module, component), logging.INFO, "FILE", payload)


def log_batch_processing(
    module: str,
    component: str,
    operation: str,
    total_items: int,
    success_count: int,
    failure_count: int,
    duration: float,
    status: str,
    extra: Optional[Dict[str, Any]] = None,
) -> None:
    payload = {
        "operation": operation,
        "total": total_items,
        "ok": success_count,
        "failed": failure_count,
        "seconds": round(float(duration), 6),
        "status": status,
        **(extra or {}),
    }
    _event(get_unified_logger(module, component), logging.INFO, "BATCH", payload)


__all__ = [
    "TRACE_LEVEL",
    "init_logging",
    "build_logging_config",
    "level_from_env",
    "get_unified_logger",
    "mdc_put",
    "mdc_clear",
    "MDCFilter",
    "JSONFormatter",
    "log_task_start",
    "log_task_end",
    "log_processing_step",
    "log_error",
    "log_performance",
    "log_file_operation",
    "log_batch_processing",
]
