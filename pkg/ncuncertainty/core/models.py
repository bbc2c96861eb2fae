from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from ncuncertainty.core.errors import GridError, GridMismatch


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@lru_cache(maxsize=64)
def _axis(n: int, half_width: float) -> np.ndarray:
    x = -half_width + (2.0 * half_width / n) * np.arange(n, dtype=float)
    x.setflags(write=False)
    return x


@lru_cache(maxsize=64)
def _wavenumbers(n: int, half_width: float, zero_nyquist: bool) -> np.ndarray:
    k = 2.0 * math.pi * np.fft.fftfreq(n, d=2.0 * half_width / n)
    if zero_nyquist:
        k[n // 2] = 0.0
    k.setflags(write=False)
    return k


@dataclass(frozen=True)
class GridSpec:
    """Periodic rectangular grid on [-L1, L1) x [-L2, L2).

    Axis 0 of every sampled array is x1, axis 1 is x2.
    """

    n1: int = 128
    n2: int = 128
    L1: float = 12.0
    L2: float = 12.0

    def __post_init__(self) -> None:
        for name in ("n1", "n2"):
            n = getattr(self, name)
            if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
                raise GridError(f"{name} must be an integer, got {n!r}")
            if n % 2:
                raise GridError(f"{name}={n} is not even")
            if not _is_power_of_two(int(n)):
                raise GridError(f"{name}={n} is not a power of two")
            object.__setattr__(self, name, int(n))
        for name in ("L1", "L2"):
            v = float(getattr(self, name))
            if not (v > 0.0 and math.isfinite(v)):
                raise GridError(f"{name} must be a positive half-width, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def h1(self) -> float:
        return 2.0 * self.L1 / self.n1

    @property
    def h2(self) -> float:
        return 2.0 * self.L2 / self.n2

    @property
    def cell(self) -> float:
        return self.h1 * self.h2

    def axis(self, k: int) -> np.ndarray:
        return _axis(self.n1, self.L1) if k == 1 else _axis(self.n2, self.L2)

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis(1), self.axis(2), indexing="ij")

    def wavenumbers(self, k: int, *, zero_nyquist: bool = True) -> np.ndarray:
        """Angular wavenumbers in FFT order; the Nyquist mode is zeroed for first derivatives."""
        if k == 1:
            return _wavenumbers(self.n1, self.L1, zero_nyquist)
        return _wavenumbers(self.n2, self.L2, zero_nyquist)

    def dual(self) -> "GridSpec":
        """Frequency grid of the unitary transform: spacing pi/L, same point count."""
        return GridSpec(
            self.n1, self.n2, self.n1 * math.pi / (2.0 * self.L1), self.n2 * math.pi / (2.0 * self.L2)
        )

    def enlarged(self, n1: Optional[int] = None, n2: Optional[int] = None) -> "GridSpec":
        """Grid with the same spacing and more points."""
        m1 = int(n1 or self.n1)
        m2 = int(n2 or self.n2)
        if m1 < self.n1 or m2 < self.n2:
            raise GridError("enlarged grid must not be smaller than the original")
        return GridSpec(m1, m2, m1 * self.h1 / 2.0, m2 * self.h2 / 2.0)

    def same_spacing(self, other: "GridSpec", rtol: float = 1e-12) -> bool:
        return math.isclose(self.h1, other.h1, rel_tol=rtol) and math.isclose(
            self.h2, other.h2, rel_tol=rtol
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_mapping(cls, conf: Mapping[str, Any]) -> "GridSpec":
        n = conf.get("grid")
        L = conf.get("L")
        return cls(
            n1=int(conf.get("n1") or n or 128),
            n2=int(conf.get("n2") or n or 128),
            L1=float(conf.get("L1") or L or 12.0),
            L2=float(conf.get("L2") or L or 12.0),
        )


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex samples of a state on a grid.

    ``domain`` is ``"position"`` for ordinary states and ``"frequency"`` for samples on
    the dual grid produced by the Fourier transform.
    """

    grid: GridSpec
    values: np.ndarray
    norm_cache: Optional[float] = None
    domain: str = "position"
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.complex128, copy=True)
        if arr.shape != self.grid.shape:
            raise GridMismatch(
                f"values of shape {arr.shape} do not match grid {self.grid.shape}",
                module="states",
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "meta", dict(self.meta))

    def norm(self) -> float:
        if self.norm_cache is not None:
            return float(self.norm_cache)
        return math.sqrt(self.grid.cell * float(np.sum(np.abs(self.values) ** 2)))

    def inner(self, other: "WaveFunction") -> complex:
        """Discrete L2 product, linear in ``self`` and antilinear in ``other``."""
        self.require_same_grid(other)
        return complex(self.grid.cell * np.vdot(other.values, self.values))

    def normalized(self) -> "WaveFunction":
        nrm = math.sqrt(self.grid.cell * float(np.sum(np.abs(self.values) ** 2)))
        if nrm == 0.0:
            raise GridError("cannot normalize the zero state", module="states")
        return self.with_values(self.values / nrm, norm_cache=1.0)

    def with_values(self, values: np.ndarray, **changes: Any) -> "WaveFunction":
        return WaveFunction(
            grid=changes.pop("grid", self.grid),
            values=values,
            norm_cache=changes.pop("norm_cache", None),
            domain=changes.pop("domain", self.domain),
            meta={**self.meta, **changes.pop("meta", {})},
        )

    def require_same_grid(self, other: "WaveFunction") -> None:
        if self.grid != other.grid:
            raise GridMismatch(f"grid {other.grid} differs from {self.grid}")

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.values.imag == 0.0))

    def summary(self) -> Dict[str, Any]:
        return {"grid": self.grid.to_dict(), "norm": self.norm(), "domain": self.domain, **self.meta}


__all__ = ["GridSpec", "WaveFunction"]
