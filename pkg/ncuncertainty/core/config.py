from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

try:
    import yaml  # type: ignore
except Exception:
    yaml = None  # type: ignore

from ncuncertainty.core.errors import FormatError, NcuError
from ncuncertainty.core.models import GridSpec

# yaml.YAMLError and json.JSONDecodeError (a ValueError) both mean a malformed file
_PARSE_ERRORS: tuple = (OSError, ValueError) + (
    (yaml.YAMLError,) if yaml is not None else ()
)


def load_config_file(path: Optional[str | Path]) -> Dict[str, Any]:
    """Read a YAML or JSON config into a dict; a missing path gives ``{}``."""
    if not path:
        return {}
    p = Path(path)
    if not p.exists():
        return {}

    try:
        with p.open("r", encoding="utf-8") as f:
            if p.suffix.lower() in (".yml", ".yaml"):
                if yaml is None:
                    raise NcuError("PyYAML is not installed: pip install pyyaml", module="config")
                data = yaml.safe_load(f) or {}
            else:
                data = json.load(f) or {}
    except _PARSE_ERRORS as e:
        raise FormatError(f"cannot read config {p}: {e}", module="config") from e
    if not isinstance(data, dict):
        raise NcuError(f"config {p} must hold a mapping", module="config")
    return data


def resolve_threads(explicit: Optional[int], conf: Mapping[str, Any]) -> int:
    """Flag > config > NCU_THREADS > 1."""
    if explicit:
        return max(1, int(explicit))
    if conf.get("threads"):
        return max(1, int(conf["threads"]))
    env = os.getenv("NCU_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise NcuError(f"NCU_THREADS={env!r} is not an integer", module="config")
    return 1


@dataclass(frozen=True)
class RunConfig:
    """Resolved inputs of one CLI run; embedded verbatim in every report."""

    subcommand: str
    theta: float = 0.0
    eta: float = 0.0
    epsilon: float = 0.0
    split: float = 1.0
    grid: GridSpec = field(default_factory=GridSpec)
    seed: int = 0
    threads: int = 1
    tol: Optional[float] = None
    options: Dict[str, Any] = field(default_factory=dict)
    outputs: Dict[str, Optional[str]] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["grid"] = self.grid.to_dict()
        return d

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RunConfig":
        grid = data.get("grid") or {}
        return cls(
            subcommand=str(data["subcommand"]),
            theta=float(data.get("theta", 0.0)),
            eta=float(data.get("eta", 0.0)),
            epsilon=float(data.get("epsilon", 0.0)),
            split=float(data.get("split", 1.0)),
            grid=GridSpec(**grid) if grid else GridSpec(),
            seed=int(data.get("seed", 0)),
            threads=int(data.get("threads", 1)),
            tol=(float(data["tol"]) if data.get("tol") is not None else None),
            options=dict(data.get("options") or {}),
            outputs=dict(data.get("outputs") or {}),
        )


__all__ = ["load_config_file", "resolve_threads", "RunConfig"]
