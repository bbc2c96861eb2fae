"""Discrete short-time Fourier transform on the state grid.

    V_g f(x, omega) = \\int f(t) conj(g(t - x)) exp(-2 pi i t.omega) dt

The x lattice is the state grid subsampled by ``stride``; the omega lattice is the full
DFT lattice with spacing 1/(2L). The window is shifted circularly, so summing
|g(t - x)|^2 over the x lattice reproduces |g|^2 and the discrete Moyal identity
|V_g f| = |f| |g| holds up to the Riemann-sum error of the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Optional, Tuple

import numpy as np
import scipy.fft as sfft

from ncuncertainty.core.errors import CoverageError, EmptyWindow, GridMismatch
from ncuncertainty.core.models import GridSpec, WaveFunction
from ncuncertainty.core.parallel import map_ordered
from ncuncertainty.states.constructors import boundary_mass

COVERAGE_TOL = 1e-8


@dataclass(frozen=True)
class StftLattice:
    stride: int = 2

    def x_axis(self, grid: GridSpec, k: int) -> np.ndarray:
        return grid.axis(k)[:: self.stride]

    def omega_axis(self, grid: GridSpec, k: int) -> np.ndarray:
        n, L = (grid.n1, grid.L1) if k == 1 else (grid.n2, grid.L2)
        return (np.arange(n) - n // 2) / (2.0 * L)

    def spacings(self, grid: GridSpec) -> Tuple[float, float, float, float]:
        return (
            self.stride * grid.h1,
            self.stride * grid.h2,
            1.0 / (2.0 * grid.L1),
            1.0 / (2.0 * grid.L2),
        )

    def cell(self, grid: GridSpec) -> float:
        d = self.spacings(grid)
        return d[0] * d[1] * d[2] * d[3]


@dataclass
class StftGrid:
    window: WaveFunction = field(repr=False)
    samples: np.ndarray = field(repr=False)
    x1: np.ndarray = field(repr=False)
    x2: np.ndarray = field(repr=False)
    omega1: np.ndarray = field(repr=False)
    omega2: np.ndarray = field(repr=False)
    spacings: Tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    @property
    def cell(self) -> float:
        s = self.spacings
        return s[0] * s[1] * s[2] * s[3]

    def norm(self) -> float:
        return math.sqrt(self.cell * float(np.sum(np.abs(self.samples) ** 2)))

    def spectrogram_rows(self, x_index: Tuple[int, int]) -> Iterator[Dict[str, float]]:
        """|V|^2 over the omega lattice at one x lattice point, for CSV export."""
        i, j = x_index
        sl = np.abs(self.samples[i, j]) ** 2
        for a, w1 in enumerate(self.omega1):
            for b, w2 in enumerate(self.omega2):
                yield {
                    "x1": float(self.x1[i]),
                    "x2": float(self.x2[j]),
                    "omega1": float(w1),
                    "omega2": float(w2),
                    "power": float(sl[a, b]),
                }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "shape": list(self.samples.shape),
            "spacings": list(self.spacings),
            "norm": self.norm(),
            "window": self.window.summary(),
        }


def default_window(grid: GridSpec) -> WaveFunction:
    """Normalized standard Gaussian pi^(-1/2) exp(-|x|^2/2)."""
    x1, x2 = grid.axis(1)[:, None], grid.axis(2)[None, :]
    vals = np.exp(-(x1**2 + x2**2) / 2.0) / math.sqrt(math.pi)
    return WaveFunction(grid=grid, values=vals, meta={"family": "window", "kind": "standard_gaussian"})


def _check_inputs(f: WaveFunction, g: WaveFunction) -> None:
    if f.grid != g.grid:
        raise GridMismatch(f"window grid {g.grid} differs from state grid {f.grid}", module="modspace")
    if g.norm() == 0.0:
        raise EmptyWindow("the STFT window has zero norm")
    m = boundary_mass(f)
    if m > COVERAGE_TOL:
        raise CoverageError(
            f"state has {m:.3e} of its mass at the grid edge; the lattice does not cover it",
            details={"boundary_mass": m, "tol": COVERAGE_TOL},
        )


def _phase(grid: GridSpec, lattice: StftLattice) -> np.ndarray:
    w1 = lattice.omega_axis(grid, 1)[:, None]
    w2 = lattice.omega_axis(grid, 2)[None, :]
    return np.exp(2j * math.pi * (grid.L1 * w1 + grid.L2 * w2))


def _slice(
    f: WaveFunction, gconj: np.ndarray, lattice: StftLattice, phase: np.ndarray, p: int
) -> np.ndarray:
    """All (x2, omega) samples for the p-th x1 lattice point."""
    grid = f.grid
    s = lattice.stride
    out = np.empty((grid.n2 // s, grid.n1, grid.n2), dtype=np.complex128)
    shifted1 = np.roll(gconj, p * s - grid.n1 // 2, axis=0)
    for q in range(grid.n2 // s):
        win = np.roll(shifted1, q * s - grid.n2 // 2, axis=1)
        out[q] = grid.cell * phase * sfft.fftshift(sfft.fft2(f.values * win))
    return out


def iter_slices(
    f: WaveFunction,
    g: Optional[WaveFunction] = None,
    lattice: StftLattice = StftLattice(),
    *,
    threads: int = 1,
) -> Iterator[Tuple[int, np.ndarray]]:
    g = g if g is not None else default_window(f.grid)
    _check_inputs(f, g)
    gconj = np.conj(g.values)
    phase = _phase(f.grid, lattice)
    count = f.grid.n1 // lattice.stride
    # slices are produced in batches of ``threads`` so memory stays bounded
    batch = max(1, threads)
    for start in range(0, count, batch):
        idx = list(range(start, min(count, start + batch)))
        arrays = map_ordered(lambda k: _slice(f, gconj, lattice, phase, k), idx, threads)
        yield from zip(idx, arrays)


def stft(
    f: WaveFunction,
    g: Optional[WaveFunction] = None,
    lattice: StftLattice = StftLattice(),
    *,
    threads: int = 1,
) -> StftGrid:
    g = g if g is not None else default_window(f.grid)
    grid = f.grid
    s = lattice.stride
    samples = np.empty((grid.n1 // s, grid.n2 // s, grid.n1, grid.n2), dtype=np.complex128)
    for p, arr in iter_slices(f, g, lattice, threads=threads):
        samples[p] = arr
    return StftGrid(
        window=g,
        samples=samples,
        x1=lattice.x_axis(grid, 1),
        x2=lattice.x_axis(grid, 2),
        omega1=lattice.omega_axis(grid, 1),
        omega2=lattice.omega_axis(grid, 2),
        spacings=lattice.spacings(grid),
    )


__all__ = [
    "StftLattice",
    "StftGrid",
    "stft",
    "iter_slices",
    "default_window",
    "COVERAGE_TOL",
]
