from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from ncuncertainty.core.errors import GridMismatch, NotNormalized
from ncuncertainty.core.models import WaveFunction
from ncuncertainty.operators.assemble import OperatorHandle

NORM_TOL = 1e-8


def require_normalized(f: WaveFunction, tol: float = NORM_TOL) -> None:
    nrm = f.norm()
    if abs(nrm - 1.0) > tol:
        raise NotNormalized(f"state norm {nrm:.12g} deviates from 1 by more than {tol:g}")


def _check_grid(op: OperatorHandle, f: WaveFunction) -> None:
    if op.grid != f.grid:
        raise GridMismatch(f"operator grid {op.grid} differs from state grid {f.grid}", module="states")


def expectation(op: OperatorHandle, f: WaveFunction) -> complex:
    """<op f, f> under the discrete inner product."""
    _check_grid(op, f)
    require_normalized(f)
    return op(f).inner(f)


def expectation_with_defect(op: OperatorHandle, f: WaveFunction) -> Tuple[complex, float]:
    """Expectation and its realness defect |Im <op f, f>|."""
    value = expectation(op, f)
    return value, abs(value.imag)


def dispersion(op: OperatorHandle, f: WaveFunction, center: Optional[float] = None) -> float:
    """|(op - center) f|; the real part of the expectation is used when ``center`` is None."""
    _check_grid(op, f)
    require_normalized(f)
    of = op(f).values
    c = expectation(op, f).real if center is None else float(center)
    return float(np.sqrt(f.grid.cell * np.sum(np.abs(of - c * f.values) ** 2)))


def apply_norm(op: OperatorHandle, f: WaveFunction) -> float:
    """|op f| without the normalization requirement."""
    _check_grid(op, f)
    return op(f).norm()


__all__ = [
    "NORM_TOL",
    "require_normalized",
    "expectation",
    "expectation_with_defect",
    "dispersion",
    "apply_norm",
]
