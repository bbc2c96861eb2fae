"""Graph norms of the pairs, the B norm, the M^2_m norm and their equivalence.

    |f|_alpha^2 = 2|f|^2 + |u f|^2 + |v f|^2
    |f|_B^2     = \\int (2 + (x1 + E x1^2/lambda)^2 + x2^2) |f|^2 dx + \\int |xi|^2 |f~|^2 dxi

Each generator is a real multiplication part plus a real multiple of one xi_k, so for real
f the cross terms drop out and |u f|^2 + |v f|^2 = \\int W(x)|f|^2 + kappa_1|xi_1 f|^2 +
kappa_2|xi_2 f|^2. The sandwich constants below compare W and kappa with the B weights;
the upper constant uses (|p| + |q|)^2 <= 2|p|^2 + 2|q|^2 and so holds for complex f too.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ncuncertainty.algebra.params import AlgebraParams
from ncuncertainty.algebra.symbols import Tag
from ncuncertainty.core.models import WaveFunction
from ncuncertainty.infra.logging import get_unified_logger, log_processing_step
from ncuncertainty.modspace.stft import StftLattice, default_window, iter_slices
from ncuncertainty.modspace.weights import Weight, WeightKind
from ncuncertainty.operators.assemble import assemble
from ncuncertainty.states.transforms import fourier
from ncuncertainty.uncertainty.pairs import ALL_PAIRS, PairAlpha

SANDWICH_RTOL = 1e-9


def modulation_norm(
    f: WaveFunction,
    g: Optional[WaveFunction] = None,
    w: Optional[Weight] = None,
    lattice: StftLattice = StftLattice(),
    *,
    threads: int = 1,
) -> float:
    """(sum |V_g f|^2 m^2 cell)^(1/2); ``w=None`` means m = 1."""
    grid = f.grid
    x1 = lattice.x_axis(grid, 1)
    x2 = lattice.x_axis(grid, 2)[:, None, None]
    w1 = lattice.omega_axis(grid, 1)[None, :, None]
    w2 = lattice.omega_axis(grid, 2)[None, None, :]
    total = 0.0
    for p, arr in iter_slices(f, g, lattice, threads=threads):
        power = np.abs(arr) ** 2
        if w is not None:
            power = power * w.squared(np.asarray(x1[p]), x2, w1, w2)
        total += float(power.sum())
    return math.sqrt(lattice.cell(grid) * total)


def norm_alpha_sq(alpha: PairAlpha, params: AlgebraParams, f: WaveFunction) -> float:
    u = assemble(alpha.u, params, f.grid)
    v = assemble(alpha.v, params, f.grid)
    return 2.0 * f.norm() ** 2 + u(f).norm() ** 2 + v(f).norm() ** 2


def norm_B_sq(params: AlgebraParams, f: WaveFunction) -> float:
    grid = f.grid
    x1, x2 = grid.axis(1)[:, None], grid.axis(2)[None, :]
    u = x1 + (params.E / params.lambda_) * x1**2
    pos = grid.cell * float(np.sum((2.0 + u**2 + x2**2) * np.abs(f.values) ** 2))
    ft = fourier(f)
    k1, k2 = ft.grid.axis(1)[:, None], ft.grid.axis(2)[None, :]
    mom = ft.grid.cell * float(np.sum((k1**2 + k2**2) * np.abs(ft.values) ** 2))
    return pos + mom


@dataclass(frozen=True)
class _OpShape:
    mult_axis: int
    kind: str  # "u": c u(x1)^2, "quad": c x^2, "p2": (F x1^2 - b x1)^2
    coef: float
    deriv_axis: int
    kappa: float
    both: bool


def _shapes(params: AlgebraParams) -> Dict[Tag, _OpShape]:
    lam, mu = params.lambda_, params.mu
    a, b = params.a_coef, params.b_coef
    p2_mult = params.F != 0.0 or b != 0.0
    return {
        Tag.Q1: _OpShape(1, "u", lam**2, 2, a**2, a != 0.0),
        Tag.Q2: _OpShape(2, "quad", lam**2, 1, a**2, a != 0.0),
        Tag.P1: _OpShape(2, "quad", b**2, 1, mu**2, b != 0.0),
        Tag.P2: _OpShape(1, "p2", 1.0, 2, mu**2, p2_mult),
    }


def _p2_ratio_extrema(params: AlgebraParams, t: float) -> Tuple[float, float]:
    """inf and sup over x1 of (1 + t (F x1^2 - b x1)^2) / (1 + u(x1)^2)."""
    F, b = params.F, params.b_coef
    e = params.E / params.lambda_
    if F == 0.0 and e == 0.0:
        c = t * b**2
        return min(1.0, c), max(1.0, c)
    if e != 0.0:
        asym = t * (F / e) ** 2
    else:
        asym = math.inf
    scales = [1.0]
    if e != 0.0:
        scales.append(1.0 / abs(e))
    if F != 0.0:
        scales.append(abs(b / F))
    X = 10.0 * max(scales)
    xs = np.linspace(-X, X, 400001)

    def ratio(x: Any) -> Any:
        return (1.0 + t * (F * x**2 - b * x) ** 2) / (1.0 + (x + e * x**2) ** 2)

    vals = ratio(xs)
    dx = xs[1] - xs[0]
    j_min, j_max = int(np.argmin(vals)), int(np.argmax(vals))
    lo = minimize_scalar(ratio, bounds=(xs[j_min] - dx, xs[j_min] + dx), method="bounded")
    hi = minimize_scalar(lambda x: -ratio(x), bounds=(xs[j_max] - dx, xs[j_max] + dx), method="bounded")
    inf = min(float(vals[j_min]), float(lo.fun), asym)
    sup = max(float(vals[j_max]), float(-hi.fun), asym)
    return inf, sup


def _ratio_extrema(shape: _OpShape, params: AlgebraParams, t: float) -> Tuple[float, float]:
    if shape.kind == "p2":
        return _p2_ratio_extrema(params, t)
    c = t * shape.coef
    return min(1.0, c), max(1.0, c)


@dataclass
class SandwichConstants:
    alpha: str
    K: float
    K_sq: float
    C: float
    lower_terms: Dict[str, float] = field(default_factory=dict)
    upper_terms: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def sandwich_constants(alpha: PairAlpha, params: AlgebraParams) -> SandwichConstants:
    """K^2 |f|_B^2 <= |f|_alpha^2 <= C |f|_B^2 (lower bound for real f).

    For (Q1, Q2) this gives K = min(lambda, theta/2lambda, 1) and
    C = max(2 lambda^2, theta^2/(2 lambda^2), 1).
    """
    shapes = _shapes(params)
    ops = [shapes[t] for t in alpha.tags]
    x1_op = next(s for s in ops if s.mult_axis == 1)
    x2_op = next(s for s in ops if s.mult_axis == 2)
    d1_op = next(s for s in ops if s.deriv_axis == 1)
    d2_op = next(s for s in ops if s.deriv_axis == 2)
    lo1, _ = _ratio_extrema(x1_op, params, 1.0)
    lo2, _ = _ratio_extrema(x2_op, params, 1.0)
    _, hi1 = _ratio_extrema(x1_op, params, 2.0 if x1_op.both else 1.0)
    _, hi2 = _ratio_extrema(x2_op, params, 2.0 if x2_op.both else 1.0)
    lower = {"x1": lo1, "x2": lo2, "xi1": d1_op.kappa, "xi2": d2_op.kappa}
    upper = {
        "x1": hi1,
        "x2": hi2,
        "xi1": (2.0 if d1_op.both else 1.0) * d1_op.kappa,
        "xi2": (2.0 if d2_op.both else 1.0) * d2_op.kappa,
    }
    k_sq = min(lower.values())
    return SandwichConstants(
        alpha=alpha.value,
        K=math.sqrt(max(k_sq, 0.0)),
        K_sq=k_sq,
        C=max(upper.values()),
        lower_terms=lower,
        upper_terms=upper,
    )


@dataclass
class PairNorm:
    alpha: str
    norm_alpha_sq: float
    K_sq: float
    C: float
    lower_ok: bool
    upper_ok: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class NormEquivalenceReport:
    norm_B_sq: float
    norm_Mm: float
    norm_L2: float
    window: str
    real_valued: bool
    pairs: List[PairNorm] = field(default_factory=list)
    passed: bool = True
    gated: bool = True

    @property
    def mm_to_b_ratio(self) -> float:
        return self.norm_Mm / math.sqrt(self.norm_B_sq)

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["mm_to_b_ratio"] = self.mm_to_b_ratio
        return d


def norm_equivalence_report(
    f: WaveFunction,
    params: AlgebraParams,
    *,
    g: Optional[WaveFunction] = None,
    lattice: StftLattice = StftLattice(),
    pairs: Sequence[PairAlpha] = ALL_PAIRS,
    threads: int = 1,
) -> NormEquivalenceReport:
    """Norms of ``f`` for every pair, the B norm, the M^2_m norm and the sandwich checks.

    The lower sandwich bound is only gated for real-valued states; for complex states the
    checks are recorded and ``gated`` is False.
    """
    window = g if g is not None else default_window(f.grid)
    b_sq = norm_B_sq(params, f)
    mm = modulation_norm(f, window, Weight(WeightKind.M, params), lattice, threads=threads)
    real = bool(np.max(np.abs(f.values.imag)) <= 1e-14 * max(1.0, float(np.max(np.abs(f.values)))))
    report = NormEquivalenceReport(
        norm_B_sq=b_sq,
        norm_Mm=mm,
        norm_L2=f.norm(),
        window=str(window.meta.get("kind", window.meta.get("family", "custom"))),
        real_valued=real,
        gated=real,
    )
    for alpha in pairs:
        consts = sandwich_constants(alpha, params)
        na = norm_alpha_sq(alpha, params, f)
        lower_ok = consts.K_sq * b_sq <= na * (1.0 + SANDWICH_RTOL)
        upper_ok = na <= consts.C * b_sq * (1.0 + SANDWICH_RTOL)
        report.pairs.append(
            PairNorm(
                alpha=alpha.value,
                norm_alpha_sq=na,
                K_sq=consts.K_sq,
                C=consts.C,
                lower_ok=lower_ok,
                upper_ok=upper_ok,
            )
        )
        log_processing_step(
            "modspace", "norms", "sandwich", {"alpha": alpha.value, "lower": lower_ok, "upper": upper_ok}
        )
    if real:
        report.passed = all(p.lower_ok and p.upper_ok for p in report.pairs)
    else:
        report.passed = all(p.upper_ok for p in report.pairs)
    if not report.passed:
        get_unified_logger("modspace", "norms").warning("norm sandwich violated: %s", report.pairs)
    return report


@dataclass
class WindowConstants:
    ratios: List[float]
    c1: float
    c2: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def window_constants(
    states: Sequence[WaveFunction],
    params: AlgebraParams,
    *,
    g: Optional[WaveFunction] = None,
    lattice: StftLattice = StftLattice(),
) -> WindowConstants:
    """Empirical range of |f|_{M^2_m} / |f|_B over a family of states."""
    ratios: List[float] = []
    for f in states:
        window = g if g is not None else default_window(f.grid)
        mm = modulation_norm(f, window, Weight(WeightKind.M, params), lattice)
        ratios.append(mm / math.sqrt(norm_B_sq(params, f)))
    return WindowConstants(ratios=ratios, c1=min(ratios), c2=max(ratios))


__all__ = [
    "modulation_norm",
    "norm_alpha_sq",
    "norm_B_sq",
    "sandwich_constants",
    "SandwichConstants",
    "norm_equivalence_report",
    "NormEquivalenceReport",
    "PairNorm",
    "window_constants",
    "WindowConstants",
]
