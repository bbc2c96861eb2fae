"""Minimizers of the uncertainty functional as ground states of H = u u + v v.

The operator is applied matrix-free and handed to ARPACK through a
``scipy.sparse.linalg.LinearOperator``. For complex Hermitian input ``eigsh`` runs the
Arnoldi process, which on a Hermitian operator is Lanczos with full reorthogonalization.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from ncuncertainty.algebra.params import AlgebraParams
from ncuncertainty.core.errors import GridError, GridMismatch, NoConvergence
from ncuncertainty.core.models import GridSpec, WaveFunction
from ncuncertainty.infra.logging import get_unified_logger, log_performance
from ncuncertainty.operators.assemble import OperatorHandle, assemble, kernel_for
from ncuncertainty.states.constructors import boundary_mass, seeded_rng
from ncuncertainty.states.measure import require_normalized
from ncuncertainty.uncertainty.pairs import PairAlpha

# Relative gap under which neighbouring Ritz values are reported as one level
DEGENERACY_RTOL = 1e-6


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-8
    max_iter: int = 5000
    seed: int = 0
    ncv: Optional[int] = None

    @classmethod
    def from_mapping(cls, conf: Dict[str, Any]) -> "SolverOptions":
        return cls(
            tol=float(conf.get("tol") or 1e-8),
            max_iter=int(conf.get("max_iter") or 5000),
            seed=int(conf.get("seed") or 0),
            ncv=int(conf["ncv"]) if conf.get("ncv") else None,
        )


@dataclass
class GroundStateResult:
    alpha: PairAlpha
    nu0: float
    state: WaveFunction = field(repr=False)
    residual: float
    iterations: int
    grid: GridSpec
    params: AlgebraParams
    edge_mass: float = 0.0
    tol: float = 1e-8

    @property
    def converged(self) -> bool:
        return self.residual <= self.tol * max(1.0, self.nu0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha.value,
            "nu0": self.nu0,
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "edge_mass": self.edge_mass,
            "grid": self.grid.to_dict(),
            "params": self.params.to_dict(),
            "state_norm": self.state.norm(),
        }


def hamiltonian(alpha: PairAlpha, params: AlgebraParams, grid: GridSpec) -> OperatorHandle:
    """u(u .) + v(v .) for the pair alpha."""
    h = assemble(alpha.hamiltonian_symbol(), params, grid)
    return OperatorHandle(
        symbol=h.symbol, params=params, grid=grid, action=h.action, name=f"H{alpha.value}"
    )


def q1q2_pde_coefficients(params: AlgebraParams) -> Dict[str, float]:
    """Coefficients of H for (Q1, Q2) written as a second-order differential operator.

    H = -c_lap Lap - i theta x2 d1 + i theta (x1 + E x1^2/lambda) d2
        + lambda^2 |x|^2 + 2 lambda E x1^3 + E^2 x1^4
    """
    lam, E = params.lambda_, params.E
    return {
        "laplacian": (params.theta / (2.0 * lam)) ** 2,
        "x2_d1": params.theta,
        "u_d2": params.theta,
        "u_quadratic": E / lam,
        "harmonic": lam**2,
        "cubic": 2.0 * lam * E,
        "quartic": E**2,
    }


def q1q2_operator(params: AlgebraParams, grid: GridSpec) -> OperatorHandle:
    """The explicit differential form of H for (Q1, Q2), applied without composing q1, q2."""
    k = kernel_for(grid)
    c = q1q2_pde_coefficients(params)
    x1, x2, x1sq = k.x1, k.x2, k.x1sq
    u = x1 + c["u_quadratic"] * x1sq
    pot = c["harmonic"] * (x1sq + x2**2) + c["cubic"] * x1sq * x1 + c["quartic"] * x1sq**2

    def act(v: np.ndarray) -> np.ndarray:
        # d = i xi, so -i th x2 d1 = th x2 xi1 and i th u d2 = -th u xi2
        xi1 = k.xi(v, 1)
        xi2 = k.xi(v, 2)
        lap = k.xi(xi1, 1) + k.xi(xi2, 2)
        return c["laplacian"] * lap + c["x2_d1"] * x2 * xi1 - c["u_d2"] * u * xi2 + pot * v

    sym = PairAlpha.Q1Q2.hamiltonian_symbol()
    return OperatorHandle(symbol=sym, params=params, grid=grid, action=act, name="Hq1q2_pde")


def _start_vector(grid: GridSpec, seed: int) -> np.ndarray:
    rng = seeded_rng(seed)
    x1, x2 = grid.mesh()
    env = np.exp(-(x1**2 + x2**2) / (2.0 * (min(grid.L1, grid.L2) / 4.0) ** 2))
    noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    v0 = (env * noise).ravel()
    return v0 / np.linalg.norm(v0)


class _CountingOperator:
    def __init__(self, op: OperatorHandle) -> None:
        self.op = op
        self.count = 0

    def matvec(self, v: np.ndarray) -> np.ndarray:
        self.count += 1
        return self.op.matvec(v)

    def linear_operator(self) -> LinearOperator:
        n = self.op.grid.n1 * self.op.grid.n2
        return LinearOperator((n, n), matvec=self.matvec, rmatvec=self.matvec, dtype=np.complex128)


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    j = int(np.argmax(np.abs(vec)))
    ph = vec[j] / abs(vec[j]) if vec[j] != 0 else 1.0
    return vec / ph


def _ritz(
    op: OperatorHandle, k: int, opts: SolverOptions
) -> Tuple[np.ndarray, np.ndarray, int]:
    grid = op.grid
    n = grid.n1 * grid.n2
    if k >= n - 1:
        raise GridError(f"requested {k} eigenpairs on a grid of {n} points", module="eigensolver")
    counter = _CountingOperator(op)
    ncv = opts.ncv or min(n - 1, max(2 * k + 1, 40))
    try:
        vals, vecs = eigsh(
            counter.linear_operator(),
            k=k,
            which="SA",
            v0=_start_vector(grid, opts.seed),
            ncv=ncv,
            maxiter=opts.max_iter,
            tol=opts.tol * 1e-2,
        )
    except ArpackNoConvergence as exc:
        raise NoConvergence(
            f"ARPACK did not converge within {opts.max_iter} restarts",
            details={"converged": len(exc.eigenvalues), "requested": k, "matvecs": counter.count},
        ) from exc
    order = np.argsort(vals.real)
    return vals.real[order], vecs[:, order], counter.count


def _as_state(vec: np.ndarray, grid: GridSpec, meta: Dict[str, Any]) -> WaveFunction:
    vals = _fix_phase(vec).reshape(grid.shape) / math.sqrt(grid.cell)
    return WaveFunction(grid=grid, values=vals, meta=meta).normalized()


def _residual_of(op: OperatorHandle, f: WaveFunction, nu: float) -> float:
    hf = op(f).values
    return math.sqrt(f.grid.cell * float(np.sum(np.abs(hf - nu * f.values) ** 2)))


def ground_state(
    alpha: PairAlpha,
    params: AlgebraParams,
    grid: GridSpec,
    opts: Optional[SolverOptions] = None,
) -> GroundStateResult:
    opts = opts or SolverOptions()
    logger = get_unified_logger("eigensolver", "ground")
    t0 = time.perf_counter()
    op = hamiltonian(alpha, params, grid)
    vals, vecs, count = _ritz(op, 1, opts)
    f0 = _as_state(vecs[:, 0], grid, {"family": "ground_state", "alpha": alpha.value})
    # Rayleigh quotient of the normalized vector is the reported eigenvalue
    nu0 = op(f0).inner(f0).real
    res = _residual_of(op, f0, nu0)
    result = GroundStateResult(
        alpha=alpha,
        nu0=nu0,
        state=f0,
        residual=res,
        iterations=count,
        grid=grid,
        params=params,
        edge_mass=boundary_mass(f0),
        tol=opts.tol,
    )
    log_performance(
        "eigensolver",
        "ground",
        "ground_state",
        time.perf_counter() - t0,
        {"alpha": alpha.value, "nu0": nu0, "residual": res, "matvecs": count},
    )
    if not result.converged:
        raise NoConvergence(
            f"ground state residual {res:.3e} exceeds {opts.tol:.1e}*max(1, nu0)",
            details=result.to_dict(),
        )
    if result.edge_mass > 1e-8:
        logger.warning(
            "ground state of %s carries %.2e of its mass at the grid edge; enlarge L",
            alpha.value,
            result.edge_mass,
        )
    return result


def residual(
    alpha: PairAlpha, params: AlgebraParams, grid: GridSpec, f: WaveFunction, nu: float
) -> float:
    """|H f - nu f|."""
    if f.grid != grid:
        raise GridMismatch(f"state on {f.grid} passed for grid {grid}", module="eigensolver")
    require_normalized(f)
    return _residual_of(hamiltonian(alpha, params, grid), f, float(nu))


@dataclass
class SpectrumEntry:
    nu: float
    residual: float

    def to_dict(self) -> Dict[str, float]:
        return {"nu": self.nu, "residual": self.residual}


@dataclass
class LowSpectrum:
    alpha: PairAlpha
    entries: List[SpectrumEntry]
    degenerate_groups: List[List[int]]
    states: List[WaveFunction] = field(default_factory=list, repr=False)
    iterations: int = 0

    @property
    def values(self) -> List[float]:
        return [e.nu for e in self.entries]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha.value,
            "entries": [e.to_dict() for e in self.entries],
            "degenerate_groups": self.degenerate_groups,
            "iterations": self.iterations,
        }


def _group_levels(values: List[float], rtol: float = DEGENERACY_RTOL) -> List[List[int]]:
    groups: List[List[int]] = []
    for i, v in enumerate(values):
        if groups and abs(v - values[groups[-1][-1]]) <= rtol * max(1.0, abs(v)):
            groups[-1].append(i)
        else:
            groups.append([i])
    return [g for g in groups if len(g) > 1]


def spectrum_low(
    alpha: PairAlpha,
    params: AlgebraParams,
    grid: GridSpec,
    k: int,
    opts: Optional[SolverOptions] = None,
) -> LowSpectrum:
    """Lowest ``k`` Ritz values (nondecreasing) with their true residuals."""
    opts = opts or SolverOptions()
    if not 1 <= k <= 10:
        raise GridError(f"spectrum_low supports 1 <= k <= 10, got {k}", module="eigensolver")
    op = hamiltonian(alpha, params, grid)
    vals, vecs, count = _ritz(op, k, opts)
    entries: List[SpectrumEntry] = []
    states: List[WaveFunction] = []
    for j in range(k):
        f = _as_state(vecs[:, j], grid, {"family": "ritz", "alpha": alpha.value, "index": j})
        nu = op(f).inner(f).real
        entries.append(SpectrumEntry(nu=nu, residual=_residual_of(op, f, nu)))
        states.append(f)
    order = sorted(range(k), key=lambda j: entries[j].nu)
    entries = [entries[j] for j in order]
    states = [states[j] for j in order]
    groups = _group_levels([e.nu for e in entries])
    if groups:
        get_unified_logger("eigensolver", "spectrum").info(
            "degenerate levels for %s: %s", alpha.value, groups
        )
    return LowSpectrum(
        alpha=alpha, entries=entries, degenerate_groups=groups, states=states, iterations=count
    )


__all__ = [
    "SolverOptions",
    "GroundStateResult",
    "LowSpectrum",
    "SpectrumEntry",
    "hamiltonian",
    "q1q2_operator",
    "q1q2_pde_coefficients",
    "ground_state",
    "residual",
    "spectrum_low",
]
