"""Unitary transforms on grid states: Fourier, dilation, phase-space translation, embedding.

The Fourier transform follows the physicist convention

    f~(xi) = (2 pi)^-1 \\int f(x) exp(-i x.xi) dx

and lands on the dual grid (spacing pi/L, same point count), where it is exactly unitary
for the discrete inner product.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.fft as sfft

from ncuncertainty.core.errors import GridError, ResolutionError
from ncuncertainty.core.models import GridSpec, WaveFunction
from ncuncertainty.states.constructors import boundary_mass, spectral_edge_mass

# Relative |f|^2 mass allowed outside the part of the grid a transform can represent
RESOLUTION_TOL = 1e-18


def _phase(grid: GridSpec, dual: GridSpec, sign: float) -> np.ndarray:
    xi1, xi2 = dual.axis(1)[:, None], dual.axis(2)[None, :]
    return np.exp(sign * 1j * (grid.L1 * xi1 + grid.L2 * xi2))


def fourier(f: WaveFunction) -> WaveFunction:
    """Unitary Fourier transform onto the dual grid."""
    grid = f.grid
    dual = grid.dual()
    coef = grid.cell / (2.0 * math.pi)
    vals = coef * _phase(grid, dual, +1.0) * sfft.fftshift(sfft.fft2(f.values))
    return WaveFunction(
        grid=dual,
        values=vals,
        domain="frequency",
        meta={**f.meta, "dual_of": grid},
    )


def inverse_fourier(ft: WaveFunction) -> WaveFunction:
    dual = ft.grid
    grid = ft.meta.get("dual_of") or dual.dual()
    coef = (2.0 * math.pi) / grid.cell
    vals = coef * sfft.ifft2(sfft.ifftshift(ft.values * _phase(grid, dual, -1.0)))
    meta = {k: v for k, v in ft.meta.items() if k != "dual_of"}
    return WaveFunction(grid=grid, values=vals, domain="position", meta=meta)


@lru_cache(maxsize=32)
def _interp_matrix(n: int, L: float, s: float) -> np.ndarray:
    """Rows evaluate the trigonometric interpolant at x/s; points outside [-L, L) are zeroed."""
    h = 2.0 * L / n
    x = -L + h * np.arange(n)
    y = x / s
    k = 2.0 * math.pi * np.fft.fftfreq(n, d=h)
    k[n // 2] = 0.0
    B = np.exp(1j * np.outer(y + L, k)) / n
    B[np.abs(y) >= L] = 0.0
    return B


def _mass_outside(p: np.ndarray, inside1: np.ndarray, inside2: np.ndarray) -> float:
    total = float(p.sum())
    if total == 0.0:
        return 0.0
    return float(1.0 - p[np.ix_(inside1, inside2)].sum() / total)


def dilate(f: WaveFunction, s: float) -> WaveFunction:
    """(D_s f)(x) = |s|^-1 f(x/s), resampled by spectral interpolation."""
    if s == 0.0 or not math.isfinite(s):
        raise ResolutionError(f"dilation factor must be finite and nonzero, got {s!r}")
    if s == 1.0:
        return f.with_values(f.values)
    grid = f.grid
    p = np.abs(f.values) ** 2
    # spatial: the dilated state needs f on |y| < L/|s|
    x1, x2 = grid.axis(1), grid.axis(2)
    outside = _mass_outside(p, np.abs(x1) < grid.L1 / abs(s), np.abs(x2) < grid.L2 / abs(s))
    # spectral: frequencies of f are multiplied by 1/|s|
    spec = np.abs(sfft.fft2(f.values)) ** 2
    k1 = np.abs(grid.wavenumbers(1, zero_nyquist=False))
    k2 = np.abs(grid.wavenumbers(2, zero_nyquist=False))
    kmax1, kmax2 = math.pi / grid.h1, math.pi / grid.h2
    aliased = _mass_outside(spec, k1 < abs(s) * kmax1, k2 < abs(s) * kmax2)
    if outside > RESOLUTION_TOL or aliased > RESOLUTION_TOL:
        raise ResolutionError(
            f"dilation by {s:g} is not resolvable on {grid.shape}",
            details={"spatial_loss": outside, "spectral_loss": aliased, "s": s},
        )
    F = sfft.fft2(f.values)
    B1 = _interp_matrix(grid.n1, grid.L1, float(s))
    B2 = _interp_matrix(grid.n2, grid.L2, float(s))
    vals = (B1 @ F @ B2.T) / abs(s)
    return f.with_values(vals, meta={"dilation": float(s) * float(f.meta.get("dilation", 1.0))})


def translate(
    f: WaveFunction, x0: Sequence[float] = (0.0, 0.0), xi0: Sequence[float] = (0.0, 0.0)
) -> WaveFunction:
    """f(x - x0) exp(i xi0.x): Fourier shift followed by modulation."""
    a1, a2 = float(x0[0]), float(x0[1])
    w1, w2 = float(xi0[0]), float(xi0[1])
    grid = f.grid
    vals = f.values
    if a1 or a2:
        k1 = grid.wavenumbers(1)[:, None]
        k2 = grid.wavenumbers(2)[None, :]
        vals = sfft.ifft2(np.exp(-1j * (k1 * a1 + k2 * a2)) * sfft.fft2(vals))
    if w1 or w2:
        x1, x2 = grid.axis(1)[:, None], grid.axis(2)[None, :]
        vals = vals * np.exp(1j * (w1 * x1 + w2 * x2))
    out = f.with_values(vals, meta={"translation": [a1, a2, w1, w2]})
    b = boundary_mass(out)
    e = spectral_edge_mass(out)
    if b > 1e-12 or e > 1e-12:
        raise ResolutionError(
            "translated state is not resolvable on the grid",
            details={"boundary_mass": b, "spectral_edge_mass": e, "x0": [a1, a2], "xi0": [w1, w2]},
        )
    return out


def embed(f: WaveFunction, target: GridSpec) -> WaveFunction:
    """Zero-pad ``f`` symmetrically onto a larger grid with the same spacing."""
    g = f.grid
    if not g.same_spacing(target):
        raise GridError(f"embedding requires equal spacing: {g} vs {target}")
    if target.n1 < g.n1 or target.n2 < g.n2:
        raise GridError("target grid is smaller than the source grid")
    o1 = (target.n1 - g.n1) // 2
    o2 = (target.n2 - g.n2) // 2
    vals = np.zeros(target.shape, dtype=np.complex128)
    vals[o1 : o1 + g.n1, o2 : o2 + g.n2] = f.values
    return WaveFunction(grid=target, values=vals, domain=f.domain, meta=dict(f.meta))


def grid_for_shift(
    grid: GridSpec, shift: Tuple[float, float], margin: Optional[Tuple[float, float]] = None
) -> GridSpec:
    """Smallest power-of-two enlargement (same spacing) holding a state moved by ``shift``.

    ``margin`` is the half-extent of the state per axis; the full original window by default.
    """
    m1, m2 = margin if margin is not None else (grid.L1, grid.L2)
    n1, n2 = grid.n1, grid.n2
    while (n1 * grid.h1 / 2.0) < abs(shift[0]) + m1:
        n1 *= 2
    while (n2 * grid.h2 / 2.0) < abs(shift[1]) + m2:
        n2 *= 2
    return grid.enlarged(n1, n2)


__all__ = [
    "fourier",
    "inverse_fourier",
    "dilate",
    "translate",
    "embed",
    "grid_for_shift",
    "RESOLUTION_TOL",
]
