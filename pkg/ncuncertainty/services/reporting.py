from __future__ import annotations

import csv
import io
import json
import sys
import time
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, TextIO

from rich.console import Console

from ncuncertainty import __version__
from ncuncertainty.core.config import RunConfig
from ncuncertainty.core.utils import to_jsonable
from ncuncertainty.infra.logging import log_file_operation


def build_report(config: RunConfig, kind: str, payload: Any) -> Dict[str, Any]:
    """Wrap a result as {kind, version, config, result} with JSON-safe values."""
    return {
        "kind": kind,
        "version": __version__,
        "config": to_jsonable(config.to_dict()),
        "result": to_jsonable(payload),
    }


def dumps_report(report: Mapping[str, Any]) -> str:
    return json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True)


def write_json(report: Mapping[str, Any], out: Optional[str | Path] = None) -> Optional[Path]:
    """Write to ``out`` or stdout. Returns the path written, if any."""
    text = dumps_report(report)
    if not out:
        sys.stdout.write(text + "\n")
        return None
    t0 = time.perf_counter()
    p = Path(out)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text + "\n", encoding="utf-8")
    log_file_operation(
        "services", "report", "write_json", str(p), p.stat().st_size, time.perf_counter() - t0, "ok"
    )
    return p


def print_pretty(report: Mapping[str, Any], console: Optional[Console] = None) -> None:
    (console or Console(highlight=False)).print_json(dumps_report(report))


def rows_to_csv(rows: Iterable[Mapping[str, Any]], handle: TextIO) -> int:
    """Write dict rows with a header taken from the first row; returns the row count."""
    writer: Optional[csv.DictWriter] = None
    count = 0
    for row in rows:
        clean = {k: to_jsonable(v) for k, v in row.items()}
        if writer is None:
            writer = csv.DictWriter(handle, fieldnames=list(clean.keys()), lineterminator="\n")
            writer.writeheader()
        writer.writerow(clean)
        count += 1
    return count


def write_csv(rows: Iterable[Mapping[str, Any]], out: str | Path) -> Path:
    t0 = time.perf_counter()
    p = Path(out)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8", newline="") as fh:
        n = rows_to_csv(rows, fh)
    log_file_operation(
        "services",
        "report",
        "write_csv",
        str(p),
        p.stat().st_size,
        time.perf_counter() - t0,
        "ok",
        {"rows": n},
    )
    return p


def csv_text(rows: Iterable[Mapping[str, Any]]) -> str:
    buf = io.StringIO()
    rows_to_csv(rows, buf)
    return buf.getvalue()


__all__ = [
    "build_report",
    "dumps_report",
    "write_json",
    "print_pretty",
    "rows_to_csv",
    "write_csv",
    "csv_text",
]
