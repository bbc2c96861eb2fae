"""Effective potentials of the reduced Wheeler-De Witt equation -phi'' + V phi = 0.

    canonical:      V(x) = 48 exp(-2 sqrt3 x) - (eta x - c)^2
    non-canonical:  V(x) = -(F mu^2 x^2 + eta x - a)^2
                           + 48 exp(-2 sqrt3 x - 2 sqrt3 mu^2 E x^2 + sqrt3 theta a / (mu lambda))
    constant:       V(x) = c
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Dict, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from ncuncertainty.algebra.params import AlgebraParams
from ncuncertainty.core.errors import NoBracket
from ncuncertainty.infra.logging import get_unified_logger

SQRT3 = math.sqrt(3.0)
EXP_CLAMP = 700.0

ArrayLike = Union[float, np.ndarray]


class PotentialKind(str, Enum):
    CANONICAL = "canonical"
    NONCANONICAL = "noncanonical"
    CONSTANT = "constant"


@dataclass(frozen=True)
class PotentialSpec:
    kind: PotentialKind
    params: AlgebraParams
    c_or_a: float = 0.0

    def _exponent(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
        """Exponent g(x) of the 48 exp(g) term with g' and the constant g''."""
        p = self.params
        if self.kind is PotentialKind.CANONICAL:
            return -2.0 * SQRT3 * x, np.full_like(x, -2.0 * SQRT3), 0.0
        k = 2.0 * SQRT3 * p.mu**2 * p.E
        shift = SQRT3 * p.theta * self.c_or_a / (p.mu * p.lambda_)
        return -2.0 * SQRT3 * x - k * x**2 + shift, -2.0 * SQRT3 - 2.0 * k * x, -2.0 * k

    def _poly(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
        """P with V = -P^2 + 48 exp(g), and P', P''."""
        p = self.params
        if self.kind is PotentialKind.CANONICAL:
            return p.eta * x - self.c_or_a, np.full_like(x, p.eta), 0.0
        fm = p.F * p.mu**2
        return fm * x**2 + p.eta * x - self.c_or_a, 2.0 * fm * x + p.eta, 2.0 * fm

    def _exp_term(self, g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        clamped = g > EXP_CLAMP
        return 48.0 * np.exp(np.minimum(g, EXP_CLAMP)), clamped

    def evaluate(self, x: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        """V(x) and a flag array marking points where the exponent was clamped."""
        xs = np.asarray(x, dtype=float)
        if self.kind is PotentialKind.CONSTANT:
            return np.full_like(xs, self.c_or_a), np.zeros_like(xs, dtype=bool)
        P, _, _ = self._poly(xs)
        g, _, _ = self._exponent(xs)
        e, clamped = self._exp_term(g)
        return e - P**2, clamped

    def __call__(self, x: ArrayLike) -> Any:
        v, _ = self.evaluate(x)
        return float(v) if np.ndim(v) == 0 else v

    def derivative(self, x: ArrayLike) -> Any:
        xs = np.asarray(x, dtype=float)
        if self.kind is PotentialKind.CONSTANT:
            out = np.zeros_like(xs)
        else:
            P, dP, _ = self._poly(xs)
            g, dg, _ = self._exponent(xs)
            e, _ = self._exp_term(g)
            out = -2.0 * P * dP + dg * e
        return float(out) if np.ndim(out) == 0 else out

    def second_derivative(self, x: ArrayLike) -> Any:
        xs = np.asarray(x, dtype=float)
        if self.kind is PotentialKind.CONSTANT:
            out = np.zeros_like(xs)
        else:
            P, dP, d2P = self._poly(xs)
            g, dg, d2g = self._exponent(xs)
            e, _ = self._exp_term(g)
            out = -2.0 * dP**2 - 2.0 * P * d2P + (d2g + dg**2) * e
        return float(out) if np.ndim(out) == 0 else out

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "c_or_a": self.c_or_a, "params": self.params.to_dict()}


def potential_eval(spec: PotentialSpec, x: float) -> float:
    v, clamped = spec.evaluate(x)
    if bool(np.any(clamped)):
        get_unified_logger("wdw", "potential").warning(
            "exponent clamped at %.0f for x=%.6g", EXP_CLAMP, x
        )
    return float(v)


def exponent_clamped(spec: PotentialSpec, x: float) -> bool:
    _, clamped = spec.evaluate(x)
    return bool(np.any(clamped))


@dataclass
class MinimumResult:
    x_min: float
    V_min: float
    curvature: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _scan_points(lo: float, hi: float) -> np.ndarray:
    near = min(hi, lo + 50.0)
    pts = np.linspace(lo, near, 5001)
    if hi > near:
        far_hi = min(hi, 1e4)
        pts = np.concatenate([pts, np.geomspace(max(near, 1.0), far_hi, 2001)])
    return np.unique(pts)


def find_minimum(spec: PotentialSpec, bracket: Tuple[float, float]) -> MinimumResult:
    """First stable interior minimum of V in ``bracket`` (an infinite end is scanned to 1e4)."""
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise NoBracket(f"empty bracket [{lo}, {hi}]")
    if spec.kind is PotentialKind.CONSTANT:
        raise NoBracket("a constant potential has no interior minimum")
    xs = _scan_points(lo, hi)
    dv = spec.derivative(xs)
    change = np.nonzero((dv[:-1] < 0.0) & (dv[1:] >= 0.0))[0]
    if change.size == 0:
        raise NoBracket(
            f"V' has no sign change from - to + on [{lo:g}, {hi:g}]",
            details={"kind": spec.kind.value, "c_or_a": spec.c_or_a},
        )
    j = int(change[0])
    x_min = brentq(spec.derivative, xs[j], xs[j + 1], xtol=1e-14, rtol=1e-14)
    curv = spec.second_derivative(x_min)
    if not curv > 0.0:
        raise NoBracket(f"critical point at x={x_min:.6g} is not a stable minimum (V''={curv:.3g})")
    return MinimumResult(x_min=float(x_min), V_min=spec(x_min), curvature=float(curv))


__all__ = [
    "PotentialKind",
    "PotentialSpec",
    "potential_eval",
    "exponent_clamped",
    "find_minimum",
    "MinimumResult",
    "EXP_CLAMP",
]
