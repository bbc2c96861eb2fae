"""Phase-space weights psi, phi and m = sqrt(psi^2 + phi^2).

    psi(x)     = sqrt(1 + (x1 + E x1^2 / lambda)^2 + x2^2)
    phi(omega) = sqrt(1 + 4 pi^2 |omega|^2)

Frequencies are in cycles (the STFT kernel is exp(-2 pi i t.omega)), so xi = 2 pi omega.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from ncuncertainty.algebra.params import AlgebraParams
from ncuncertainty.core.errors import DomainError
from ncuncertainty.infra.logging import get_unified_logger
from ncuncertainty.states.constructors import seeded_rng

# growth allowed in the sampled moderateness constant when the sample count doubles
MODERATE_BAND = 1.1


class WeightKind(str, Enum):
    PSI = "Psi"
    PHI = "Phi"
    M = "M"


@dataclass(frozen=True)
class Weight:
    kind: WeightKind
    params: AlgebraParams

    @property
    def e_over_lambda(self) -> float:
        return self.params.E / self.params.lambda_

    def psi_sq(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        u = x1 + self.e_over_lambda * x1**2
        return 1.0 + u**2 + x2**2

    @staticmethod
    def phi_sq(w1: np.ndarray, w2: np.ndarray) -> np.ndarray:
        return 1.0 + 4.0 * math.pi**2 * (w1**2 + w2**2)

    def squared(
        self, x1: np.ndarray, x2: np.ndarray, w1: np.ndarray, w2: np.ndarray
    ) -> np.ndarray:
        if self.kind is WeightKind.PSI:
            return self.psi_sq(x1, x2) + 0.0 * w1
        if self.kind is WeightKind.PHI:
            return self.phi_sq(w1, w2) + 0.0 * x1
        return self.psi_sq(x1, x2) + self.phi_sq(w1, w2)


def weight_eval(w: Weight, x: Sequence[float], omega: Sequence[float]) -> float:
    val = w.squared(
        np.asarray(float(x[0])),
        np.asarray(float(x[1])),
        np.asarray(float(omega[0])),
        np.asarray(float(omega[1])),
    )
    return float(np.sqrt(val))


def m_of(params: AlgebraParams, z: np.ndarray) -> np.ndarray:
    """m at points z of shape (..., 4) ordered (x1, x2, omega1, omega2)."""
    w = Weight(WeightKind.M, params)
    return np.sqrt(w.squared(z[..., 0], z[..., 1], z[..., 2], z[..., 3]))


def moderating_weight(zp: np.ndarray) -> np.ndarray:
    """v(z') = 1 + (1 + |x'|^2)^2 + 1 + 4 pi^2 |omega'|^2."""
    xs = zp[..., 0] ** 2 + zp[..., 1] ** 2
    ws = zp[..., 2] ** 2 + zp[..., 3] ** 2
    return 1.0 + (1.0 + xs) ** 2 + 1.0 + 4.0 * math.pi**2 * ws


def decay_bound(params: AlgebraParams, R: float) -> float:
    """Upper bound of 1/m on the sphere |z| = R, valid for R >= 2 lambda/|E|."""
    E, lam = params.E, params.lambda_
    if E == 0.0:
        raise DomainError("the anisotropic decay bound needs E != 0", module="modspace")
    if R < 2.0 * lam / abs(E):
        raise DomainError(f"R={R:g} below 2 lambda/|E| = {2 * lam / abs(E):g}", module="modspace")
    return 1.0 / math.sqrt(R**2 + 2.0 - 27.0 * lam**2 / (16.0 * E**2))


def _sphere_points(R: float, n: int, rng: np.random.Generator, params: AlgebraParams) -> np.ndarray:
    z = rng.standard_normal((n, 4))
    z *= R / np.linalg.norm(z, axis=1, keepdims=True)
    extra: List[List[float]] = [
        [R, 0, 0, 0],
        [-R, 0, 0, 0],
        [0, R, 0, 0],
        [0, 0, R, 0],
    ]
    if params.E != 0.0:
        # m is smallest on the sphere at x1 = -3 lambda / (2E), omega = 0
        x1 = -1.5 * params.lambda_ / params.E
        if abs(x1) <= R:
            x2 = math.sqrt(R**2 - x1**2)
            extra += [[x1, x2, 0, 0], [x1, -x2, 0, 0]]
    return np.vstack([z, np.asarray(extra, dtype=float)])


@dataclass
class DecayRow:
    R: float
    max_inv_m: float
    bound: float
    holds: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class WeightCheckReport:
    moderate_constant: float
    moderate_constant_doubled: float
    moderate_ratio: float
    moderate_stable: bool
    min_m: float
    decay: List[DecayRow] = field(default_factory=list)
    decay_decreasing: bool = True
    bound_kind: str = "anisotropic"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _moderate_ratio(params: AlgebraParams, w: np.ndarray) -> float:
    z, zp = w[None, :4], w[None, 4:]
    return float((m_of(params, z + zp) / (m_of(params, z) * moderating_weight(zp)))[0])


def _moderate_constant(params: AlgebraParams, n: int, rng: np.random.Generator, scale: float) -> float:
    """Largest sampled m(z+z')/(m(z) v(z')), polished by a local search from the best sample."""
    # the origin row keeps 1/v(0) = 1/3 in every sample
    z = np.vstack([scale * rng.standard_normal((n, 4)), np.zeros((1, 4))])
    zp = np.vstack([scale * rng.standard_normal((n, 4)), np.zeros((1, 4))])
    ratio = m_of(params, z + zp) / (m_of(params, z) * moderating_weight(zp))
    j = int(np.argmax(ratio))
    res = minimize(
        lambda w: -_moderate_ratio(params, w),
        np.concatenate([z[j], zp[j]]),
        method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-12, "maxiter": 4000},
    )
    return max(float(ratio[j]), -float(res.fun))


def weight_checks(
    params: AlgebraParams,
    R_schedule: Optional[Sequence[float]] = None,
    *,
    n_samples: int = 20000,
    seed: Optional[int] = 0,
    scale: float = 5.0,
) -> WeightCheckReport:
    """Sampled v-moderateness of m and the decay of 1/m on spheres.

    With E = 0 the isotropic bound 1/sqrt(R^2 + 2) replaces the anisotropic one.
    """
    logger = get_unified_logger("modspace", "weights")
    rng = seeded_rng(seed)
    c1 = _moderate_constant(params, n_samples, rng, scale)
    # the doubled sample is the first one plus n_samples fresh points
    c2 = max(c1, _moderate_constant(params, n_samples, rng, scale))
    grid_z = scale * rng.standard_normal((n_samples, 4))
    anisotropic = params.E != 0.0
    if R_schedule is None:
        r0 = 2.0 * params.lambda_ / abs(params.E) if anisotropic else 2.0
        R_schedule = [r0 * k for k in (1, 2, 4, 8)]
    rows: List[DecayRow] = []
    for R in sorted(float(r) for r in R_schedule):
        pts = _sphere_points(R, n_samples, rng, params)
        inv = float((1.0 / m_of(params, pts)).max())
        bound = decay_bound(params, R) if anisotropic else 1.0 / math.sqrt(R**2 + 2.0)
        rows.append(DecayRow(R=R, max_inv_m=inv, bound=bound, holds=inv <= bound * (1.0 + 1e-9)))
    values = [r.max_inv_m for r in rows]
    report = WeightCheckReport(
        moderate_constant=c1,
        moderate_constant_doubled=c2,
        moderate_ratio=c2 / c1,
        moderate_stable=bool(np.isfinite(c2) and c2 <= MODERATE_BAND * c1),
        min_m=float(m_of(params, grid_z).min()),
        decay=rows,
        decay_decreasing=all(a > b for a, b in zip(values, values[1:])),
        bound_kind="anisotropic" if anisotropic else "isotropic",
    )
    logger.info(
        "weight checks: C=%.4g (doubled %.4g), decay holds=%s",
        c1,
        c2,
        all(r.holds for r in rows),
    )
    return report


__all__ = [
    "MODERATE_BAND",
    "WeightKind",
    "Weight",
    "weight_eval",
    "m_of",
    "moderating_weight",
    "decay_bound",
    "weight_checks",
    "WeightCheckReport",
    "DecayRow",
]
