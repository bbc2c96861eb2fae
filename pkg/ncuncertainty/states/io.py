"""State files: one JSON header line, then little-endian float64 (re, im) pairs, row-major."""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import Union

import numpy as np

from ncuncertainty.core.errors import FormatError, GridMismatch
from ncuncertainty.core.models import GridSpec, WaveFunction
from ncuncertainty.infra.logging import log_file_operation

_DTYPE = np.dtype("<f8")


def save_state(path: Union[str, Path], f: WaveFunction) -> Path:
    t0 = time.perf_counter()
    p = Path(path)
    header = {"n1": f.grid.n1, "n2": f.grid.n2, "L1": f.grid.L1, "L2": f.grid.L2}
    pairs = np.empty(f.values.size * 2, dtype=_DTYPE)
    flat = f.values.ravel(order="C")
    pairs[0::2] = flat.real
    pairs[1::2] = flat.imag
    with p.open("wb") as fh:
        fh.write((json.dumps(header) + "\n").encode("utf-8"))
        fh.write(pairs.tobytes())
    log_file_operation(
        "states", "io", "write", str(p), p.stat().st_size, time.perf_counter() - t0, "success"
    )
    return p


def load_state(path: Union[str, Path]) -> WaveFunction:
    t0 = time.perf_counter()
    p = Path(path)
    try:
        raw = p.read_bytes()
        nl = raw.index(b"\n")
        header = json.loads(raw[:nl].decode("utf-8"))
        grid = GridSpec(
            int(header["n1"]), int(header["n2"]), float(header["L1"]), float(header["L2"])
        )
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise FormatError(f"{p} is not a readable state file: {e}", module="states") from e
    body = raw[nl + 1 :]
    if len(body) % _DTYPE.itemsize:
        raise FormatError(f"{p}: sample block is not a whole number of float64 values")
    pairs = np.frombuffer(body, dtype=_DTYPE)
    if pairs.size != 2 * grid.n1 * grid.n2:
        raise GridMismatch(
            f"{p} holds {pairs.size // 2} samples, header declares {grid.n1 * grid.n2}",
            module="states",
        )
    vals = (pairs[0::2] + 1j * pairs[1::2]).reshape(grid.shape)
    log_file_operation(
        "states", "io", "read", str(p), len(raw), time.perf_counter() - t0, "success"
    )
    return WaveFunction(grid=grid, values=vals, meta={"source": str(p)})


__all__ = ["save_state", "load_state"]
