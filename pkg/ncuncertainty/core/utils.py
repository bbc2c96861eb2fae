from __future__ import annotations

import dataclasses
import math
import pathlib
import time
from enum import Enum
from typing import Any, Union

import numpy as np


def now_stamp() -> str:
    """Local time as YYYYMMDD_HHMMSS."""
    return time.strftime("%Y%m%d_%H%M%S")


def ensure_directory(path: Union[str, pathlib.Path]) -> pathlib.Path:
    """Ensure directory exists and return Path object."""
    p = pathlib.Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def to_jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays, complex numbers and enums into JSON-safe values.

    Complex numbers become ``{"re": .., "im": ..}``; non-finite floats become strings so
    the output stays strict JSON.
    """
    if hasattr(obj, "to_dict") and callable(obj.to_dict):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": to_jsonable(float(obj.real)), "im": to_jsonable(float(obj.imag))}
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isfinite(v):
            return v
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    if isinstance(obj, pathlib.Path):
        return str(obj)
    return obj
