from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping, Optional

from ncuncertainty.core.utils import ensure_directory, now_stamp


def runs_base_dir(conf: Optional[Mapping[str, Any]] = None) -> Path:
    """runs/ directory, or ``runs_dir`` from the config."""
    if conf and conf.get("runs_dir"):
        return Path(str(conf["runs_dir"]))
    return Path("runs")


def new_run_dir(base: Optional[Path] = None) -> Path:
    """Create runs/<stamp>; a numeric suffix keeps two runs in one second apart."""
    base_dir = base or Path("runs")
    stamp = now_stamp()
    target = base_dir / stamp
    k = 1
    while target.exists():
        target = base_dir / f"{stamp}_{k}"
        k += 1
    return ensure_directory(target)
