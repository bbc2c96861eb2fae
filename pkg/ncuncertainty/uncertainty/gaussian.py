"""Closed forms for the Gaussian example: HPW violation and absence of a minimal length.

The state is the normalized Gaussian exp(-(x1 - x1_0)^2/a - (x2 - x2_0)^2/b). Centering it
at x1_0 = -lambda/(2E) removes the linear part of the q1 dispersion, and the product of
dispersions along b = a^(-3/2) tends to theta*eta/(8 mu lambda) < 1/2 as a -> 0.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ncuncertainty.algebra.params import AlgebraParams
from ncuncertainty.core.errors import DomainError
from ncuncertainty.core.parallel import map_ordered
from ncuncertainty.infra.logging import get_unified_logger, log_batch_processing
from ncuncertainty.states.constructors import GaussianSpec


def _require_e(params: AlgebraParams) -> None:
    if params.E == 0.0:
        raise DomainError(
            "the Gaussian example needs E != 0 (its center is -lambda/2E)",
            module="uncertainty",
            details={"theta": params.theta, "epsilon": params.epsilon},
        )


def _require_widths(a: float, b: float) -> None:
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"widths must be positive, got a={a!r}, b={b!r}", module="uncertainty")


def optimal_center(params: AlgebraParams) -> float:
    _require_e(params)
    return -params.lambda_ / (2.0 * params.E)


def dq1_closed_form(
    params: AlgebraParams, a: float, b: float, x1_0: Optional[float] = None
) -> float:
    """Dispersion of q1 for a Gaussian centred at ``x1_0`` (the optimal centre by default)."""
    _require_widths(a, b)
    lam, E = params.lambda_, params.E
    if x1_0 is None:
        _require_e(params)
        x1_0 = optimal_center(params)
    var = (
        (a / 4.0) * (lam + 2.0 * E * x1_0) ** 2
        + (a * E) ** 2 / 8.0
        + params.theta**2 / (4.0 * lam**2 * b)
    )
    return math.sqrt(var)


def dp1_closed_form(params: AlgebraParams, a: float, b: float) -> float:
    """Dispersion of p1; independent of the centre."""
    _require_widths(a, b)
    mu = params.mu
    return (mu / math.sqrt(a)) * math.sqrt(1.0 + (params.eta / (4.0 * mu**2)) ** 2 * a * b)


def product_closed_form(params: AlgebraParams, a: float, b: float) -> float:
    """dq1 * dp1 at the optimal centre, expanded into its four terms."""
    _require_e(params)
    _require_widths(a, b)
    lam, mu, E, th, et = params.lambda_, params.mu, params.E, params.theta, params.eta
    inner = (
        0.5 * mu**2 * E**2 * a
        + mu**2 * th**2 / (lam**2 * a * b)
        + et**2 * E**2 * a**2 * b / (32.0 * mu**2)
        + th**2 * et**2 / (16.0 * mu**2 * lam**2)
    )
    return 0.5 * math.sqrt(inner)


def hpw_limit(params: AlgebraParams) -> float:
    """theta eta / (8 mu lambda), equal to xi / (4 (1 + sqrt(1 - xi)))."""
    return params.theta * params.eta / (8.0 * params.mu * params.lambda_)


@dataclass
class GaussianDispersions:
    a: float
    b: float
    center: float
    dq1: float
    dp1: float
    product: float
    product_expanded: float
    limit: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def gaussian_closed_forms(params: AlgebraParams, a: float, b: float) -> GaussianDispersions:
    _require_e(params)
    dq1 = dq1_closed_form(params, a, b)
    dp1 = dp1_closed_form(params, a, b)
    return GaussianDispersions(
        a=a,
        b=b,
        center=optimal_center(params),
        dq1=dq1,
        dp1=dp1,
        product=dq1 * dp1,
        product_expanded=product_closed_form(params, a, b),
        limit=hpw_limit(params),
    )


def gaussian_moments(params: AlgebraParams, spec: GaussianSpec) -> Dict[str, float]:
    """First and second moments of q1, p1, p2 and <R> for a real Gaussian."""
    lam, mu, E, F = params.lambda_, params.mu, params.E, params.F
    bc = params.b_coef
    x0, y0 = spec.x1_0, spec.x2_0
    var_x = spec.a / 4.0
    dq1 = dq1_closed_form(params, spec.a, spec.b, x0)
    dp1 = dp1_closed_form(params, spec.a, spec.b)
    q1 = lam * x0 + E * (x0**2 + var_x)
    p1 = bc * y0
    p2 = -bc * x0 + F * (x0**2 + var_x)
    return {
        "q1": q1,
        "q1_sq": dq1**2 + q1**2,
        "p1": p1,
        "p1_sq": dp1**2 + p1**2,
        "p2": p2,
        "x1": x0,
        "R": params.r_multiplier * x0,
    }


@dataclass
class HpwSweep:
    params: Dict[str, Any]
    exponent: float
    limit: float
    rows: List[GaussianDispersions] = field(default_factory=list)
    decreasing: bool = False
    below_half: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def table(self) -> List[Dict[str, Any]]:
        return [r.to_dict() for r in self.rows]


def hpw_sweep(
    params: AlgebraParams,
    a_values: Sequence[float],
    exponent: float = -1.5,
    *,
    threads: int = 1,
) -> HpwSweep:
    """Evaluate the Gaussian example along b = a**exponent.

    ``decreasing`` reports whether the product decreases as ``a`` decreases along the
    schedule (taken in the given order after sorting by ``a`` descending).
    """
    _require_e(params)
    logger = get_unified_logger("uncertainty", "hpw")
    t0 = time.perf_counter()
    ordered = sorted((float(a) for a in a_values), reverse=True)
    rows = map_ordered(lambda a: gaussian_closed_forms(params, a, a**exponent), ordered, threads)
    products = [r.product for r in rows]
    sweep = HpwSweep(
        params=params.to_dict(),
        exponent=exponent,
        limit=hpw_limit(params),
        rows=rows,
        decreasing=all(p1 > p2 for p1, p2 in zip(products, products[1:])),
        below_half=bool(products) and products[-1] < 0.5,
    )
    log_batch_processing(
        "uncertainty", "hpw", "sweep", len(rows), len(rows), 0, time.perf_counter() - t0, "success"
    )
    if products:
        logger.info("HPW sweep: last product %.6g, limit %.6g", products[-1], sweep.limit)
    return sweep


@dataclass
class MinimalLengthTable:
    q_rows: List[Dict[str, float]]
    p_rows: List[Dict[str, float]]
    q_decreasing: bool
    p_decreasing: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def default_schedules(k_max: int = 6) -> Tuple[List[Tuple[float, float]], List[Tuple[float, float]]]:
    q = [(10.0 ** (-k), 10.0**k) for k in range(1, k_max + 1)]
    p = [(10.0**k, 10.0 ** (-k)) for k in range(1, k_max + 1)]
    return q, p


def minimal_length_probe(
    params: AlgebraParams,
    schedule: Optional[Sequence[Tuple[float, float]]] = None,
    p_schedule: Optional[Sequence[Tuple[float, float]]] = None,
) -> MinimalLengthTable:
    """dq1 along (a -> 0, b -> oo) and dp1 along ab = 1, a -> oo."""
    _require_e(params)
    dq, dp = default_schedules()
    q_sched = list(schedule) if schedule is not None else dq
    p_sched = list(p_schedule) if p_schedule is not None else dp
    q_rows = [{"a": a, "b": b, "dq1": dq1_closed_form(params, a, b)} for a, b in q_sched]
    p_rows = [{"a": a, "b": b, "dp1": dp1_closed_form(params, a, b)} for a, b in p_sched]
    qv = [r["dq1"] for r in q_rows]
    pv = [r["dp1"] for r in p_rows]
    return MinimalLengthTable(
        q_rows=q_rows,
        p_rows=p_rows,
        q_decreasing=all(x > y for x, y in zip(qv, qv[1:])),
        p_decreasing=all(x > y for x, y in zip(pv, pv[1:])),
    )


__all__ = [
    "GaussianDispersions",
    "HpwSweep",
    "MinimalLengthTable",
    "optimal_center",
    "dq1_closed_form",
    "dp1_closed_form",
    "product_closed_form",
    "hpw_limit",
    "gaussian_closed_forms",
    "gaussian_moments",
    "hpw_sweep",
    "minimal_length_probe",
    "default_schedules",
]
