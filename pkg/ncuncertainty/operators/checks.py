from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Sequence

import numpy as np

from ncuncertainty.algebra.maps import commutator_closure, inverse_map
from ncuncertainty.algebra.params import AlgebraParams
from ncuncertainty.algebra.symbols import FUNDAMENTAL, HEISENBERG_WEYL
from ncuncertainty.core.errors import GridMismatch
from ncuncertainty.core.models import GridSpec, WaveFunction
from ncuncertainty.infra.logging import get_unified_logger, log_processing_step
from ncuncertainty.operators.assemble import assemble, commutator_apply, fundamental_handles

DEFAULT_ALGEBRA_TOL = 1e-6


def relative_error(lhs: np.ndarray, rhs: np.ndarray, ref: np.ndarray) -> float:
    """|lhs - rhs| / max(|rhs|, |ref|); ``ref`` keeps zero right-hand sides meaningful."""
    denom = max(float(np.linalg.norm(rhs)), float(np.linalg.norm(ref)), 1e-300)
    return float(np.linalg.norm(lhs - rhs)) / denom


@dataclass
class PairCheck:
    pair: str
    closure: str
    errors: List[float]
    max_error: float


@dataclass
class AlgebraReport:
    params: Dict[str, Any]
    grid: Dict[str, Any]
    tol: float
    n_states: int
    pairs: List[PairCheck] = field(default_factory=list)
    max_error: float = 0.0
    passed: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ReconstructionReport:
    params: Dict[str, Any]
    grid: Dict[str, Any]
    deviations: Dict[str, float]
    max_deviation: float
    r_squared_form: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def verify_algebra(
    params: AlgebraParams,
    grid: GridSpec,
    states: Sequence[WaveFunction],
    tol: float = DEFAULT_ALGEBRA_TOL,
) -> AlgebraReport:
    """Compare [u, v] f against the assembled closure for all six fundamental pairs."""
    logger = get_unified_logger("operators", "verify")
    for f in states:
        if f.grid != grid:
            raise GridMismatch(f"state on {f.grid} passed for grid {grid}")
    handles = fundamental_handles(params, grid)
    report = AlgebraReport(
        params=params.to_dict(), grid=grid.to_dict(), tol=tol, n_states=len(states)
    )
    for ti, tj in itertools.combinations(FUNDAMENTAL, 2):
        closure = commutator_closure(params, ti, tj)
        rhs_op = assemble(closure, params, grid)
        errs = []
        for f in states:
            lhs = commutator_apply(handles[ti], handles[tj], f).values
            rhs = rhs_op(f).values
            errs.append(relative_error(lhs, rhs, f.values))
        pc = PairCheck(
            pair=f"[{ti.value},{tj.value}]",
            closure=str(closure),
            errors=errs,
            max_error=max(errs) if errs else 0.0,
        )
        report.pairs.append(pc)
        log_processing_step(
            "operators", "verify", "pair checked", {"pair": pc.pair, "max_error": pc.max_error}
        )
    report.max_error = max((p.max_error for p in report.pairs), default=0.0)
    report.passed = report.max_error <= tol
    if not report.passed:
        logger.warning("algebra verification failed: max error %.3e > tol %.1e", report.max_error, tol)
    return report


def reconstruct_hw(
    params: AlgebraParams, grid: GridSpec, f: WaveFunction, *, use_r: bool = True
) -> ReconstructionReport:
    """Apply the inverse-map images and compare with direct x, xi actions."""
    if f.grid != grid:
        raise GridMismatch(f"state on {f.grid} passed for grid {grid}")
    deviations: Dict[str, float] = {}
    for t in HEISENBERG_WEYL:
        direct = assemble(t, params, grid)(f).values
        image = inverse_map(params, t, use_r=use_r)
        via = assemble(image, params, grid)(f).values
        deviations[t.value] = relative_error(via, direct, f.values)
    r_form = "R^2" if (use_r and params.epsilon > 0.0 and params.F != 0.0) else "cancelled"
    return ReconstructionReport(
        params=params.to_dict(),
        grid=grid.to_dict(),
        deviations=deviations,
        max_deviation=max(deviations.values()),
        r_squared_form=r_form,
    )


__all__ = [
    "AlgebraReport",
    "PairCheck",
    "ReconstructionReport",
    "verify_algebra",
    "reconstruct_hw",
    "relative_error",
    "DEFAULT_ALGEBRA_TOL",
]
