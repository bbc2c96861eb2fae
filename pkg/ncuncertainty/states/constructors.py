"""Test-state families: the Gaussian of the HPW example, Hermite superpositions, smooth noise."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
import scipy.fft as sfft
from scipy.special import eval_hermite, gammaln

from ncuncertainty.core.errors import ResolutionError
from ncuncertainty.core.models import GridSpec, WaveFunction

# Relative |f|^2 mass allowed in the outer band of the grid
SUPPORT_TOL = 1e-12
SUPPORT_BAND = 4


@dataclass(frozen=True)
class GaussianSpec:
    """(4/(pi^2 a b))^(1/4) exp(-(x1-x1_0)^2/a - (x2-x2_0)^2/b)."""

    a: float = 1.0
    b: float = 1.0
    x1_0: float = 0.0
    x2_0: float = 0.0

    def __post_init__(self) -> None:
        if not (self.a > 0.0 and self.b > 0.0):
            raise ResolutionError(f"Gaussian widths must be positive, got a={self.a}, b={self.b}")

    @property
    def normalization(self) -> float:
        return (4.0 / (math.pi**2 * self.a * self.b)) ** 0.25

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _snap(x0: float, axis: np.ndarray, h: float) -> Tuple[float, bool]:
    j = int(np.argmin(np.abs(axis - x0)))
    if abs(axis[j] - x0) <= h / 2.0 and axis[j] != x0:
        return float(axis[j]), True
    return x0, False


def gaussian(grid: GridSpec, spec: GaussianSpec, *, snap: bool = False) -> WaveFunction:
    """Sample the Gaussian state; ``snap`` moves centers onto the nearest grid point."""
    for width, h, L, name in ((spec.a, grid.h1, grid.L1, "a"), (spec.b, grid.h2, grid.L2, "b")):
        sigma = math.sqrt(width / 2.0)
        if sigma < 2.0 * h or sigma > L / 4.0:
            raise ResolutionError(
                f"width sqrt({name}/2)={sigma:.4g} outside [2h, L/4]=[{2 * h:.4g}, {L / 4:.4g}]",
                details={name: width, "h": h, "L": L},
            )
    x1_0, x2_0 = spec.x1_0, spec.x2_0
    snapped = False
    if snap:
        x1_0, s1 = _snap(x1_0, grid.axis(1), grid.h1)
        x2_0, s2 = _snap(x2_0, grid.axis(2), grid.h2)
        snapped = s1 or s2
    for c, width, L, name in ((x1_0, spec.a, grid.L1, "x1_0"), (x2_0, spec.b, grid.L2, "x2_0")):
        if abs(c) + 6.0 * math.sqrt(width) > L:
            raise ResolutionError(
                f"center {name}={c:.6g} leaves the Gaussian tail outside [-{L:g}, {L:g})",
                details={name: c, "L": L},
            )
    x1, x2 = grid.axis(1)[:, None], grid.axis(2)[None, :]
    vals = spec.normalization * np.exp(-((x1 - x1_0) ** 2) / spec.a - (x2 - x2_0) ** 2 / spec.b)
    return WaveFunction(
        grid=grid,
        values=vals,
        meta={
            "family": "gaussian",
            "a": spec.a,
            "b": spec.b,
            "center": [x1_0, x2_0],
            "snapped": snapped,
        },
    )


def hermite_function(n: int, x: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """Normalized Hermite function of order n with length scale ``scale``."""
    y = x / scale
    log_norm = -0.5 * (n * math.log(2.0) + gammaln(n + 1) + 0.5 * math.log(math.pi))
    return np.exp(log_norm) * eval_hermite(n, y) * np.exp(-(y**2) / 2.0) / math.sqrt(scale)


def hermite_superposition(
    grid: GridSpec,
    rng: np.random.Generator,
    *,
    order: int = 4,
    scale: float = 1.0,
    real: bool = False,
) -> WaveFunction:
    """Random normalized combination of products of Hermite functions up to ``order``."""
    x1, x2 = grid.axis(1), grid.axis(2)
    h1 = np.stack([hermite_function(n, x1, scale) for n in range(order + 1)])
    h2 = np.stack([hermite_function(n, x2, scale) for n in range(order + 1)])
    coeff = rng.standard_normal((order + 1, order + 1))
    if not real:
        coeff = coeff + 1j * rng.standard_normal((order + 1, order + 1))
    vals = np.einsum("jk,ja,kb->ab", coeff, h1, h2)
    f = WaveFunction(grid=grid, values=vals, meta={"family": "hermite", "order": order})
    return f.normalized()


def random_smooth(
    grid: GridSpec,
    rng: np.random.Generator,
    *,
    envelope: float = 1.5,
    bandwidth: float = 2.0,
    real: bool = False,
) -> WaveFunction:
    """Gaussian-enveloped, low-pass filtered noise."""
    noise = rng.standard_normal(grid.shape)
    if not real:
        noise = noise + 1j * rng.standard_normal(grid.shape)
    k1 = grid.wavenumbers(1)[:, None]
    k2 = grid.wavenumbers(2)[None, :]
    filt = np.exp(-(k1**2 + k2**2) / (2.0 * bandwidth**2))
    smooth = sfft.ifft2(filt * sfft.fft2(noise))
    if real:
        smooth = smooth.real
    x1, x2 = grid.axis(1)[:, None], grid.axis(2)[None, :]
    vals = smooth * np.exp(-(x1**2 + x2**2) / (2.0 * envelope**2))
    f = WaveFunction(grid=grid, values=vals, meta={"family": "smooth"})
    return f.normalized()


def from_function(
    grid: GridSpec, fn: Callable[[np.ndarray, np.ndarray], np.ndarray], *, normalize: bool = True
) -> WaveFunction:
    x1, x2 = grid.mesh()
    f = WaveFunction(grid=grid, values=fn(x1, x2))
    return f.normalized() if normalize else f


def boundary_mass(f: WaveFunction, band: int = SUPPORT_BAND) -> float:
    """Fraction of |f|^2 within ``band`` grid cells of the domain edge."""
    p = np.abs(f.values) ** 2
    total = float(p.sum())
    if total == 0.0:
        return 0.0
    inner = p[band : f.grid.n1 - band, band : f.grid.n2 - band].sum()
    return float((total - inner) / total)


def spectral_edge_mass(f: WaveFunction, fraction: float = 0.1) -> float:
    """Fraction of spectral power in the outer ``fraction`` of each wavenumber axis."""
    spec = np.abs(sfft.fft2(f.values)) ** 2
    total = float(spec.sum())
    if total == 0.0:
        return 0.0
    k1 = np.abs(f.grid.wavenumbers(1, zero_nyquist=False))[:, None]
    k2 = np.abs(f.grid.wavenumbers(2, zero_nyquist=False))[None, :]
    kmax1 = math.pi / f.grid.h1
    kmax2 = math.pi / f.grid.h2
    edge = (k1 >= (1.0 - fraction) * kmax1) | (k2 >= (1.0 - fraction) * kmax2)
    return float(spec[edge].sum() / total)


def check_support(f: WaveFunction, tol: float = SUPPORT_TOL, band: int = SUPPORT_BAND) -> None:
    m = boundary_mass(f, band)
    if m > tol:
        raise ResolutionError(
            f"state carries {m:.3e} of its mass within {band} cells of the boundary",
            details={"boundary_mass": m, "tol": tol},
        )


def seeded_rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(seed)


__all__ = [
    "GaussianSpec",
    "gaussian",
    "hermite_function",
    "hermite_superposition",
    "random_smooth",
    "from_function",
    "boundary_mass",
    "spectral_edge_mass",
    "check_support",
    "seeded_rng",
]
