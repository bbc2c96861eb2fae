"""Uncertainty functionals and Robertson-type product bounds.

For a pair (u, v) the functional is F[f] = |u f|^2 + |v f|^2. The Robertson bound
compares the product of dispersions with half the modulus of the commutator expectation,
where the commutator is taken from its algebraic closure rather than applied twice.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

from ncuncertainty.algebra.maps import commutator_closure, r_symbol
from ncuncertainty.algebra.params import AlgebraParams
from ncuncertainty.core.errors import DegenerateCase, DomainError
from ncuncertainty.core.models import GridSpec, WaveFunction
from ncuncertainty.infra.logging import get_unified_logger, log_processing_step
from ncuncertainty.operators.assemble import OperatorHandle, assemble, commutator_apply
from ncuncertainty.states.measure import apply_norm, dispersion, expectation, require_normalized
from ncuncertainty.states.transforms import embed, grid_for_shift, translate
from ncuncertainty.uncertainty.pairs import PairAlpha

ROBERTSON_TOL = 1e-8
NULLIFY_TOL = 1e-6


@dataclass
class UncertaintyReport:
    pair: str
    functional_value: float
    dispersions: Dict[str, float]
    robertson_lhs: float
    robertson_rhs: float
    centers: Tuple[float, float]
    r_expectation: Optional[float] = None
    satisfied: bool = True
    tol: float = ROBERTSON_TOL

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def functional_F(alpha: PairAlpha, params: AlgebraParams, grid: GridSpec, f: WaveFunction) -> float:
    require_normalized(f)
    u = assemble(alpha.u, params, grid)
    v = assemble(alpha.v, params, grid)
    return apply_norm(u, f) ** 2 + apply_norm(v, f) ** 2


def _report(
    label: str,
    u: OperatorHandle,
    v: OperatorHandle,
    f: WaveFunction,
    rhs: float,
    a: Optional[float],
    b: Optional[float],
    r_expectation: Optional[float],
    tol: float,
) -> UncertaintyReport:
    ca = expectation(u, f).real if a is None else float(a)
    cb = expectation(v, f).real if b is None else float(b)
    du = dispersion(u, f, ca)
    dv = dispersion(v, f, cb)
    lhs = du * dv
    report = UncertaintyReport(
        pair=label,
        functional_value=apply_norm(u, f) ** 2 + apply_norm(v, f) ** 2,
        dispersions={u.name: du, v.name: dv},
        robertson_lhs=lhs,
        robertson_rhs=rhs,
        centers=(ca, cb),
        r_expectation=r_expectation,
        satisfied=lhs >= rhs - tol,
        tol=tol,
    )
    log_processing_step(
        "uncertainty",
        "robertson",
        "bound evaluated",
        {"pair": label, "lhs": lhs, "rhs": rhs, "satisfied": report.satisfied},
    )
    return report


def robertson(
    alpha: PairAlpha,
    params: AlgebraParams,
    grid: GridSpec,
    f: WaveFunction,
    a: Optional[float] = None,
    b: Optional[float] = None,
    *,
    tol: float = ROBERTSON_TOL,
) -> UncertaintyReport:
    """Dispersions about (a, b) and the closure-based right-hand side.

    ``a``/``b`` default to the real parts of the expectations, which minimize the
    dispersions.
    """
    require_normalized(f)
    u = assemble(alpha.u, params, grid)
    v = assemble(alpha.v, params, grid)
    closure = assemble(commutator_closure(params, *alpha.tags), params, grid)
    rhs = 0.5 * abs(expectation(closure, f))
    r_exp = None
    if params.epsilon > 0.0:
        r_exp = expectation(assemble(r_symbol(params), params, grid), f).real
    return _report(alpha.label, u, v, f, rhs, a, b, r_exp, tol)


def robertson_general(
    A: OperatorHandle,
    B: OperatorHandle,
    f: WaveFunction,
    a: Optional[float] = None,
    b: Optional[float] = None,
    *,
    tol: float = ROBERTSON_TOL,
) -> UncertaintyReport:
    """Robertson bound for arbitrary Hermitian composites; rhs from the raw commutator."""
    require_normalized(f)
    comm = commutator_apply(A, B, f)
    rhs = 0.5 * abs(comm.inner(f))
    return _report(f"({A.name},{B.name})", A, B, f, rhs, a, b, None, tol)


def commutator_expectation(A: OperatorHandle, B: OperatorHandle, f: WaveFunction) -> complex:
    """<[A, B] f, f> by direct double application."""
    require_normalized(f)
    return commutator_apply(A, B, f).inner(f)


@dataclass
class NullificationResult:
    pair: str
    x0: Tuple[float, float]
    xi0: Tuple[float, float]
    residual_rhs: float
    target_r: float
    achieved_r: float
    grid: Dict[str, Any]
    report: UncertaintyReport
    state: WaveFunction = field(repr=False, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        d = {k: v for k, v in asdict(self).items() if k not in ("state", "report")}
        d["report"] = self.report.to_dict()
        return d


def target_r_expectation(alpha: PairAlpha, params: AlgebraParams) -> float:
    """The <R> value that makes the closure expectation vanish."""
    c0, c1 = alpha.closure_coefficients(params)
    if params.epsilon == 0.0 or c1 == 0.0:
        raise DegenerateCase(
            f"the commutator of {alpha.label} does not depend on <R> here; no nullifier exists",
            details={"theta": params.theta, "epsilon": params.epsilon},
        )
    return -c0 / c1


def nullifying_translation(
    alpha: PairAlpha,
    params: AlgebraParams,
    grid: GridSpec,
    f: WaveFunction,
    *,
    xi0: Sequence[float] = (0.0, 0.0),
    tol: float = NULLIFY_TOL,
) -> NullificationResult:
    """Translate ``f`` along x1 so that <R> hits the pair's nullifying value.

    R acts as multiplication by r_multiplier * x1, so the required shift is affine in the
    current <x1>. The state is embedded on a larger grid of equal spacing when the shift
    leaves the original window.
    """
    logger = get_unified_logger("uncertainty", "nullify")
    target = target_r_expectation(alpha, params)
    require_normalized(f)
    x1_now = expectation(assemble("X1", params, grid), f).real
    shift = target / params.r_multiplier - x1_now
    big = grid_for_shift(grid, (shift, 0.0))
    moved = translate(embed(f, big), (shift, 0.0), xi0)
    moved = moved.normalized()
    report = robertson(alpha, params, big, moved)
    residual = report.robertson_rhs
    logger.info(
        "nullifying translation %s: shift=%.6g grid=%s residual=%.3e",
        alpha.label,
        shift,
        big.shape,
        residual,
    )
    if residual > tol:
        logger.warning("residual rhs %.3e above %.1e", residual, tol)
    return NullificationResult(
        pair=alpha.label,
        x0=(shift, 0.0),
        xi0=(float(xi0[0]), float(xi0[1])),
        residual_rhs=residual,
        target_r=target,
        achieved_r=float(report.r_expectation or 0.0),
        grid=big.to_dict(),
        report=report,
        state=moved,
    )


def scale_infimum(A: float, B: float) -> float:
    """inf over s > 0 of s^2 A + s^-2 B, which is 2 sqrt(A B)."""
    if A < 0.0 or B < 0.0:
        raise DomainError(f"scale_infimum needs A, B >= 0, got {A!r}, {B!r}", module="uncertainty")
    return 2.0 * math.sqrt(A * B)


def scale_minimizer(A: float, B: float) -> float:
    """The s attaining scale_infimum when A, B > 0."""
    if A <= 0.0 or B <= 0.0:
        raise DomainError("the infimum is not attained unless A, B > 0", module="uncertainty")
    return (B / A) ** 0.25


__all__ = [
    "UncertaintyReport",
    "NullificationResult",
    "functional_F",
    "robertson",
    "robertson_general",
    "commutator_expectation",
    "target_r_expectation",
    "nullifying_translation",
    "scale_infimum",
    "scale_minimizer",
    "ROBERTSON_TOL",
    "NULLIFY_TOL",
]
