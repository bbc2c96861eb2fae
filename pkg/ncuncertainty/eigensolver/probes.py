from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from ncuncertainty.algebra.params import AlgebraParams
from ncuncertainty.core.errors import GridMismatch
from ncuncertainty.core.models import GridSpec, WaveFunction
from ncuncertainty.eigensolver.ground import (
    GroundStateResult,
    SolverOptions,
    ground_state,
    hamiltonian,
)
from ncuncertainty.infra.logging import get_unified_logger
from ncuncertainty.operators.assemble import commutator_apply
from ncuncertainty.states.constructors import hermite_superposition, random_smooth, seeded_rng
from ncuncertainty.uncertainty.functionals import functional_F
from ncuncertainty.uncertainty.pairs import PairAlpha

VARIATIONAL_TOL = 1e-10


@dataclass
class ProbeReport:
    alpha: str
    nu0: float
    n: int
    magnitude: float
    perturbed: List[float] = field(default_factory=list)
    independent: List[float] = field(default_factory=list)
    extra: List[float] = field(default_factory=list)
    min_value: float = float("inf")
    passed: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def variational_probe(
    result: GroundStateResult,
    n: int,
    magnitude: float,
    seed: Optional[int] = 0,
    *,
    extra_states: Sequence[WaveFunction] = (),
) -> ProbeReport:
    """Evaluate the functional around and away from the minimizer.

    Every value must be at least nu0 - 1e-10. Perturbations add ``magnitude`` times a
    normalized smooth random state to f0 before renormalizing.
    """
    rng = seeded_rng(seed)
    grid, params, alpha, f0 = result.grid, result.params, result.alpha, result.state
    report = ProbeReport(alpha=alpha.value, nu0=result.nu0, n=n, magnitude=magnitude)
    for _ in range(n):
        noise = random_smooth(grid, rng)
        g = f0.with_values(f0.values + magnitude * noise.values).normalized()
        report.perturbed.append(functional_F(alpha, params, grid, g))
    for j in range(n):
        g = random_smooth(grid, rng) if j % 2 == 0 else hermite_superposition(grid, rng, order=3)
        report.independent.append(functional_F(alpha, params, grid, g))
    for g in extra_states:
        report.extra.append(functional_F(alpha, params, grid, g.normalized()))
    values = report.perturbed + report.independent + report.extra
    report.min_value = min(values) if values else result.nu0
    report.passed = report.min_value >= result.nu0 - VARIATIONAL_TOL
    if not report.passed:
        get_unified_logger("eigensolver", "probe").warning(
            "variational probe found %.12g below nu0 %.12g", report.min_value, result.nu0
        )
    return report


@dataclass
class CoherentProbeReport:
    alpha: str
    beta: str
    commutator_norm: float
    overlap: float
    nu0_alpha: float
    nu0_beta: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def coherent_state_probe(
    alpha: PairAlpha,
    beta: PairAlpha,
    params: AlgebraParams,
    grid: GridSpec,
    f: WaveFunction,
    *,
    opts: Optional[SolverOptions] = None,
    ground_alpha: Optional[GroundStateResult] = None,
    ground_beta: Optional[GroundStateResult] = None,
) -> CoherentProbeReport:
    """|[H_alpha, H_beta] f| and the overlap of the two ground states.

    Numerical evidence only: a nonzero commutator rules out a common eigenbasis on the
    probed state.
    """
    if f.grid != grid:
        raise GridMismatch(f"probe state on {f.grid} passed for grid {grid}", module="eigensolver")
    ha = hamiltonian(alpha, params, grid)
    hb = hamiltonian(beta, params, grid)
    comm = commutator_apply(ha, hb, f)
    ga = ground_alpha or ground_state(alpha, params, grid, opts)
    gb = ground_beta or (ga if beta is alpha else ground_state(beta, params, grid, opts))
    overlap = float(min(1.0, abs(ga.state.inner(gb.state))))
    return CoherentProbeReport(
        alpha=alpha.value,
        beta=beta.value,
        commutator_norm=comm.norm(),
        overlap=overlap,
        nu0_alpha=ga.nu0,
        nu0_beta=gb.nu0,
    )


def sample_states(grid: GridSpec, count: int, seed: Optional[int] = 0) -> List[WaveFunction]:
    """Deterministic mix of smooth random and Hermite states."""
    rng = seeded_rng(seed)
    out: List[WaveFunction] = []
    for j in range(count):
        out.append(random_smooth(grid, rng) if j % 2 == 0 else hermite_superposition(grid, rng))
    return out


__all__ = [
    "ProbeReport",
    "CoherentProbeReport",
    "variational_probe",
    "coherent_state_probe",
    "sample_states",
    "VARIATIONAL_TOL",
]
