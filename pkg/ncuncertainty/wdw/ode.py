"""Zero-energy integration of phi'' = V phi and tail diagnostics.

The integration is an adaptive DOP853 run with dense output; oscillation extrema are
recorded as events phi' = 0, which makes the envelope fit insensitive to phase.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid, solve_ivp
from scipy.optimize import brentq

from ncuncertainty.core.errors import StepFailure, TooFewExtrema
from ncuncertainty.infra.logging import get_unified_logger, log_performance
from ncuncertainty.wdw.potentials import PotentialSpec

LEFT_CLAMP_V = 1e12
MIN_EXTREMA = 10


@dataclass
class OdeSolution:
    xs: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    phi_prime: np.ndarray = field(repr=False)
    extrema_x: np.ndarray = field(repr=False)
    extrema_phi: np.ndarray = field(repr=False)
    dense: Callable[[Any], np.ndarray] = field(repr=False)
    spec: PotentialSpec = field(repr=False)
    method: Dict[str, Any] = field(default_factory=dict)
    residual: float = 0.0

    @property
    def steps(self) -> np.ndarray:
        return np.diff(self.xs)

    def median_step(self, lo: float, hi: float) -> float:
        mask = (self.xs[:-1] >= lo) & (self.xs[1:] <= hi)
        return float(np.median(self.steps[mask])) if mask.any() else float("nan")

    def rows(self) -> List[Dict[str, float]]:
        """(x, phi, V) per accepted step, for CSV export."""
        vs = self.spec(self.xs)
        return [
            {"x": float(x), "phi": float(p), "V": float(v)}
            for x, p, v in zip(self.xs, self.phi, np.atleast_1d(vs))
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x_range": [float(self.xs[0]), float(self.xs[-1])],
            "n_steps": int(self.xs.size - 1),
            "n_extrema": int(self.extrema_x.size),
            "max_abs_phi": float(np.max(np.abs(self.phi))),
            "residual": self.residual,
            "method": self.method,
            "potential": self.spec.to_dict(),
        }


def _left_clamp(spec: PotentialSpec, x0: float, x1: float) -> float:
    """Move the start right to where V drops to LEFT_CLAMP_V."""
    if spec(x0) <= LEFT_CLAMP_V:
        return x0
    if spec(x1) > LEFT_CLAMP_V:
        raise StepFailure(
            f"V exceeds {LEFT_CLAMP_V:g} on the whole range [{x0:g}, {x1:g}]",
            details={"last_good_x": x0},
        )
    return float(brentq(lambda x: spec(x) - LEFT_CLAMP_V, x0, x1, xtol=1e-12))


def ode_residual(sol: OdeSolution, margin_steps: int = 2) -> float:
    """max |-phi'' + V phi| / ((1 + |V|) max|phi|) over interior step points.

    phi'' comes from a five-point central difference of the dense phi' with a spacing
    matched to the local wavelength.
    """
    xs = sol.xs[margin_steps:-margin_steps] if sol.xs.size > 2 * margin_steps + 2 else sol.xs
    v = np.atleast_1d(sol.spec(xs)).astype(float)
    delta = 0.05 / np.sqrt(1.0 + np.abs(v))
    lo, hi = sol.xs[0], sol.xs[-1]
    keep = (xs - 2.0 * delta >= lo) & (xs + 2.0 * delta <= hi)
    xs, v, delta = xs[keep], v[keep], delta[keep]
    if xs.size == 0:
        return 0.0

    def dphi(points: np.ndarray) -> np.ndarray:
        return sol.dense(points)[1]

    d2 = (
        -dphi(xs + 2.0 * delta)
        + 8.0 * dphi(xs + delta)
        - 8.0 * dphi(xs - delta)
        + dphi(xs - 2.0 * delta)
    ) / (12.0 * delta)
    phi = sol.dense(xs)[0]
    scale = float(np.max(np.abs(sol.phi))) or 1.0
    return float(np.max(np.abs(-d2 + v * phi) / ((1.0 + np.abs(v)) * scale)))


def solve_zero_energy(
    spec: PotentialSpec,
    x0: float,
    x1: float,
    ic: Sequence[float] = (1.0, 0.0),
    *,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    max_step: float = math.inf,
) -> OdeSolution:
    """Integrate phi'' = V phi from x0 to x1 with (phi, phi')(x0) = ic."""
    if not x0 < x1:
        raise StepFailure(f"integration range [{x0}, {x1}] is empty", details={"last_good_x": x0})
    logger = get_unified_logger("wdw", "ode")
    t0 = time.perf_counter()
    start = _left_clamp(spec, float(x0), float(x1))
    if start != x0:
        logger.info("left end moved from %.6g to %.6g where V = %.0e", x0, start, LEFT_CLAMP_V)

    def rhs(x: float, y: np.ndarray) -> np.ndarray:
        return np.array([y[1], spec(x) * y[0]])

    def extremum(x: float, y: np.ndarray) -> float:
        return y[1]

    sol = solve_ivp(
        rhs,
        (start, float(x1)),
        [float(ic[0]), float(ic[1])],
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=True,
        events=extremum,
        max_step=max_step,
    )
    if sol.status != 0 or not np.all(np.isfinite(sol.y)):
        last = float(sol.t[-1]) if sol.t.size else start
        raise StepFailure(
            f"integration stopped at x={last:.6g}: {sol.message}",
            details={"last_good_x": last, "status": int(sol.status)},
        )
    ex_x = np.asarray(sol.t_events[0], dtype=float)
    ex_y = np.asarray(sol.y_events[0], dtype=float)
    # an event at the start point is the initial condition, not an extremum
    keep = ex_x > start
    out = OdeSolution(
        xs=sol.t,
        phi=sol.y[0],
        phi_prime=sol.y[1],
        extrema_x=ex_x[keep],
        extrema_phi=ex_y[keep, 0] if ex_y.size else np.empty(0),
        dense=sol.sol,
        spec=spec,
        method={
            "integrator": "DOP853",
            "rtol": rtol,
            "atol": atol,
            "start": start,
            "ic": [float(ic[0]), float(ic[1])],
            "nfev": int(sol.nfev),
        },
    )
    out.residual = ode_residual(out)
    log_performance(
        "wdw",
        "ode",
        "solve_zero_energy",
        time.perf_counter() - t0,
        {"steps": int(sol.t.size - 1), "extrema": int(out.extrema_x.size), "residual": out.residual},
    )
    return out


def envelope_exponent(sol: OdeSolution, tail: Tuple[float, float]) -> float:
    """Slope p of log|phi| at the extrema against log x, i.e. amplitude ~ x^p."""
    lo, hi = tail
    mask = (sol.extrema_x >= lo) & (sol.extrema_x <= hi) & (sol.extrema_phi != 0.0)
    if int(mask.sum()) < MIN_EXTREMA:
        raise TooFewExtrema(
            f"only {int(mask.sum())} extrema in [{lo:g}, {hi:g}]; need {MIN_EXTREMA}",
            details={"tail": [lo, hi]},
        )
    if lo <= 0.0:
        raise TooFewExtrema("the log-log fit needs a tail on the positive axis")
    slope, _ = np.polyfit(np.log(sol.extrema_x[mask]), np.log(np.abs(sol.extrema_phi[mask])), 1)
    return float(slope)


@dataclass
class TailProxy:
    checkpoints: List[float]
    integrals: List[float]
    increments: List[float]
    converging: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "checkpoints": self.checkpoints,
            "integrals": self.integrals,
            "increments": self.increments,
            "converging": self.converging,
        }


def tail_l2_proxy(
    sol: OdeSolution, checkpoints: Sequence[float], *, refine: int = 4
) -> TailProxy:
    """Partial integrals of phi^2 up to each checkpoint and their increments.

    ``converging`` is True when the increments over geometrically spaced checkpoints
    shrink, which separates x^-2 tails from x^-1 ones.
    """
    xs = sol.xs
    frac = np.linspace(0.0, 1.0, refine, endpoint=False)
    fine = np.concatenate([(xs[:-1, None] + frac[None, :] * np.diff(xs)[:, None]).ravel(), xs[-1:]])
    phi = sol.dense(fine)[0]
    cum = cumulative_trapezoid(phi**2, fine, initial=0.0)
    pts = sorted(float(c) for c in checkpoints if xs[0] <= c <= xs[-1])
    vals = [float(np.interp(c, fine, cum)) for c in pts]
    inc = [b - a for a, b in zip(vals, vals[1:])]
    return TailProxy(
        checkpoints=pts,
        integrals=vals,
        increments=inc,
        converging=bool(inc) and all(b < a for a, b in zip(inc, inc[1:])),
    )


__all__ = [
    "OdeSolution",
    "TailProxy",
    "solve_zero_energy",
    "ode_residual",
    "envelope_exponent",
    "tail_l2_proxy",
    "LEFT_CLAMP_V",
]
