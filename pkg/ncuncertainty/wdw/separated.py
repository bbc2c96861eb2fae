from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

from ncuncertainty.algebra.params import AlgebraParams
from ncuncertainty.core.errors import GridMismatch
from ncuncertainty.core.models import GridSpec, WaveFunction


def assemble_separated(
    params: AlgebraParams,
    a: float,
    R_a: Union[Sequence[float], np.ndarray],
    grid: GridSpec,
) -> WaveFunction:
    """psi_a(x1, x2) = R_a(x2) exp[(i x1/mu)(a - eta x2/(2 mu))] on ``grid``.

    ``R_a`` holds one sample per x2 grid point. The result is not normalized; it is
    meant for export and inspection.
    """
    r = np.asarray(R_a)
    if r.ndim != 1 or r.size != grid.n2:
        raise GridMismatch(
            f"R_a has shape {r.shape}; the x2 axis has {grid.n2} points", module="wdw"
        )
    mu = params.mu
    x1 = grid.axis(1)[:, None]
    x2 = grid.axis(2)[None, :]
    phase = np.exp(1j * (x1 / mu) * (a - (params.eta / (2.0 * mu)) * x2))
    vals = r[None, :].astype(np.complex128) * phase
    return WaveFunction(
        grid=grid,
        values=vals,
        meta={"family": "separated", "a": float(a), "params": params.to_dict()},
    )


def phase_gradient_x1(psi: WaveFunction) -> np.ndarray:
    """d/dx1 of the unwrapped phase, by central differences; shape (n1 - 2, n2)."""
    ph = np.unwrap(np.angle(psi.values), axis=0)
    return (ph[2:, :] - ph[:-2, :]) / (2.0 * psi.grid.h1)


def expected_phase_gradient(params: AlgebraParams, a: float, x2: np.ndarray) -> np.ndarray:
    mu = params.mu
    return (a - (params.eta / (2.0 * mu)) * np.asarray(x2)) / mu


def gaussian_profile(grid: GridSpec, sigma: float = 1.0) -> np.ndarray:
    x2 = grid.axis(2)
    return np.exp(-(x2**2) / (2.0 * sigma**2)) / math.sqrt(math.sqrt(math.pi) * sigma)


__all__ = [
    "assemble_separated",
    "phase_gradient_x1",
    "expected_phase_gradient",
    "gaussian_profile",
]
