"""Entropic uncertainty on the line.

With the unitary transform f~(xi) = (2 pi)^-1/2 \\int f(x) exp(-i x xi) dx the differential
entropies of |f|^2 and |f~|^2 sum to at least log(pi e), with equality on Gaussians.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict

import numpy as np
import scipy.fft as sfft

from ncuncertainty.core.errors import GridError, NotNormalized
from ncuncertainty.core.models import WaveFunction

ENTROPY_BOUND = math.log(math.pi * math.e)
ENTROPY_TOL = 1e-4
_CLIP = 1e-300


@dataclass
class EntropyReport:
    E_pos: float
    E_mom: float
    sum: float
    bound: float
    satisfied: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def line_axis(n: int, L: float) -> np.ndarray:
    if n <= 0 or n % 2:
        raise GridError(f"1D grid size must be positive and even, got {n}")
    return -L + (2.0 * L / n) * np.arange(n)


def fourier_1d(values: np.ndarray, L: float) -> np.ndarray:
    """Samples of the unitary transform on the dual axis (spacing pi/L)."""
    n = values.size
    h = 2.0 * L / n
    dual = line_axis(n, n * math.pi / (2.0 * L))
    return (h / math.sqrt(2.0 * math.pi)) * np.exp(1j * L * dual) * sfft.fftshift(sfft.fft(values))


def differential_entropy(density: np.ndarray, h: float) -> float:
    p = np.clip(np.asarray(density, dtype=float), _CLIP, None)
    # samples clipped to the floor contribute p log p ~ 0
    terms = np.where(density > _CLIP, p * np.log(p), 0.0)
    return float(-h * terms.sum())


def entropic_check(f1d: np.ndarray, L: float, *, tol: float = ENTROPY_TOL) -> EntropyReport:
    vals = np.asarray(f1d, dtype=np.complex128).ravel()
    n = vals.size
    h = 2.0 * L / n
    nrm = h * float(np.sum(np.abs(vals) ** 2))
    if abs(nrm - 1.0) > 1e-8:
        raise NotNormalized(f"1D state has squared norm {nrm:.12g}", module="uncertainty")
    ft = fourier_1d(vals, L)
    e_pos = differential_entropy(np.abs(vals) ** 2, h)
    e_mom = differential_entropy(np.abs(ft) ** 2, math.pi / L)
    total = e_pos + e_mom
    return EntropyReport(
        E_pos=e_pos,
        E_mom=e_mom,
        sum=total,
        bound=ENTROPY_BOUND,
        satisfied=total >= ENTROPY_BOUND - tol,
    )


def gaussian_1d(n: int, L: float, sigma: float = 1.0, center: float = 0.0) -> np.ndarray:
    """Normalized Gaussian amplitude with |f|^2 of standard deviation ``sigma``."""
    x = line_axis(n, L)
    return (2.0 * math.pi * sigma**2) ** -0.25 * np.exp(-((x - center) ** 2) / (4.0 * sigma**2))


def normalize_1d(values: np.ndarray, L: float) -> np.ndarray:
    h = 2.0 * L / values.size
    return values / math.sqrt(h * float(np.sum(np.abs(values) ** 2)))


def marginal_amplitude(f: WaveFunction, axis: int = 1) -> np.ndarray:
    """sqrt of the marginal density of |f|^2 along x_axis; a real 1D amplitude."""
    g = f.grid
    p = np.abs(f.values) ** 2
    if axis == 1:
        dens = g.h2 * p.sum(axis=1)
    else:
        dens = g.h1 * p.sum(axis=0)
    return np.sqrt(dens)


__all__ = [
    "EntropyReport",
    "ENTROPY_BOUND",
    "entropic_check",
    "differential_entropy",
    "fourier_1d",
    "gaussian_1d",
    "normalize_1d",
    "marginal_amplitude",
    "line_axis",
]
