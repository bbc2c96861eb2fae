"""Matrix-free spectral discretization of the differential representation.

Generators act on samples over a periodic grid:

    q1 = lambda x1 + (i theta / 2 lambda) d/dx2 + E x1^2
    q2 = lambda x2 - (i theta / 2 lambda) d/dx1
    p1 = -i mu d/dx1 + (eta / 2 mu) x2
    p2 = -i mu d/dx2 - (eta / 2 mu) x1 + F x1^2

Multiplications are pointwise, derivatives are FFT spectral derivatives with the
Nyquist mode removed, and composites apply their factors right to left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Mapping, Union

import numpy as np
import scipy.fft as sfft
from scipy.sparse.linalg import LinearOperator

from ncuncertainty.algebra.maps import r_symbol
from ncuncertainty.algebra.params import AlgebraParams
from ncuncertainty.algebra.symbols import FUNDAMENTAL, OperatorSymbol, Tag
from ncuncertainty.core.errors import GridError, GridMismatch, UnsupportedSymbol
from ncuncertainty.core.models import GridSpec, WaveFunction

Action = Callable[[np.ndarray], np.ndarray]

# FFT worker threads used inside a single operator application
FFT_WORKERS = 1


class SpectralKernel:
    """Coordinate columns and wavenumbers of one grid."""

    def __init__(self, grid: GridSpec) -> None:
        if grid.n1 % 2 or grid.n2 % 2:
            raise GridError(f"grid dimensions must be even, got {grid.shape}")
        self.grid = grid
        self.x1 = grid.axis(1)[:, None]
        self.x2 = grid.axis(2)[None, :]
        self.x1sq = self.x1**2
        self.k1 = grid.wavenumbers(1)[:, None]
        self.k2 = grid.wavenumbers(2)[None, :]

    def xi(self, v: np.ndarray, axis: int) -> np.ndarray:
        """-i d/dx_axis, axis in {1, 2}."""
        ax = axis - 1
        k = self.k1 if axis == 1 else self.k2
        return sfft.ifft(k * sfft.fft(v, axis=ax, workers=FFT_WORKERS), axis=ax, workers=FFT_WORKERS)

    def base_actions(self, params: AlgebraParams) -> Dict[Tag, Action]:
        lam, mu, E, F = params.lambda_, params.mu, params.E, params.F
        a, b = params.a_coef, params.b_coef
        x1, x2, x1sq = self.x1, self.x2, self.x1sq

        def q1(v: np.ndarray) -> np.ndarray:
            out = (lam * x1 + E * x1sq) * v
            if a:
                out = out - a * self.xi(v, 2)
            return out

        def q2(v: np.ndarray) -> np.ndarray:
            out = lam * x2 * v
            if a:
                out = out + a * self.xi(v, 1)
            return out

        def p1(v: np.ndarray) -> np.ndarray:
            out = mu * self.xi(v, 1)
            if b:
                out = out + b * x2 * v
            return out

        def p2(v: np.ndarray) -> np.ndarray:
            return mu * self.xi(v, 2) + (F * x1sq - b * x1) * v

        actions: Dict[Tag, Action] = {
            Tag.X1: lambda v: x1 * v,
            Tag.X2: lambda v: x2 * v,
            Tag.XI1: lambda v: self.xi(v, 1),
            Tag.XI2: lambda v: self.xi(v, 2),
            Tag.I: lambda v: v,
            Tag.Q1: q1,
            Tag.Q2: q2,
            Tag.P1: p1,
            Tag.P2: p2,
        }
        r_sym = r_symbol(params)
        actions[Tag.R] = _compose(r_sym, actions)
        return actions


@lru_cache(maxsize=16)
def kernel_for(grid: GridSpec) -> SpectralKernel:
    return SpectralKernel(grid)


def _compose(symbol: OperatorSymbol, actions: Mapping[Tag, Action]) -> Action:
    terms = symbol.simplify().terms
    for _, word in terms:
        for t in word:
            if not isinstance(t, Tag) or t not in actions:
                raise UnsupportedSymbol(f"cannot assemble factor {t!r}")

    def act(v: np.ndarray) -> np.ndarray:
        total = np.zeros_like(v, dtype=np.complex128)
        for c, word in terms:
            w = v
            for t in reversed(word):
                w = actions[t](w)
            total = total + c * w
        return total

    return act


@dataclass(frozen=True, eq=False)
class OperatorHandle:
    """Assembled operator: a symbol bound to parameters and a grid."""

    symbol: OperatorSymbol
    params: AlgebraParams
    grid: GridSpec
    action: Action = field(repr=False)
    name: str = ""

    def apply(self, f: WaveFunction) -> WaveFunction:
        if f.grid != self.grid:
            raise GridMismatch(f"operator on {self.grid} applied to state on {f.grid}")
        return f.with_values(self.action(f.values))

    __call__ = apply

    def matvec(self, vec: np.ndarray) -> np.ndarray:
        v = np.asarray(vec, dtype=np.complex128).reshape(self.grid.shape)
        return self.action(v).ravel()

    def as_linear_operator(self) -> LinearOperator:
        n = self.grid.n1 * self.grid.n2
        return LinearOperator((n, n), matvec=self.matvec, rmatvec=self.matvec, dtype=np.complex128)


def _coerce_symbol(symbol: Union[OperatorSymbol, Tag, str]) -> OperatorSymbol:
    if isinstance(symbol, OperatorSymbol):
        return symbol
    if isinstance(symbol, (Tag, str)):
        return OperatorSymbol.base(symbol)
    raise UnsupportedSymbol(f"cannot assemble {symbol!r}")


def assemble(
    symbol: Union[OperatorSymbol, Tag, str], params: AlgebraParams, grid: GridSpec
) -> OperatorHandle:
    sym = _coerce_symbol(symbol)
    kernel = kernel_for(grid)
    action = _compose(sym, kernel.base_actions(params))
    name = sym.tag.value if sym.is_base else str(sym)
    return OperatorHandle(symbol=sym, params=params, grid=grid, action=action, name=name)


def fundamental_handles(params: AlgebraParams, grid: GridSpec) -> Dict[Tag, OperatorHandle]:
    return {t: assemble(t, params, grid) for t in FUNDAMENTAL}


def commutator_apply(a: OperatorHandle, b: OperatorHandle, f: WaveFunction) -> WaveFunction:
    """a(b f) - b(a f)."""
    if a.grid != b.grid:
        raise GridMismatch(f"operators live on different grids: {a.grid} vs {b.grid}")
    if f.grid != a.grid:
        raise GridMismatch(f"state grid {f.grid} differs from operator grid {a.grid}")
    v = f.values
    return f.with_values(a.action(b.action(v)) - b.action(a.action(v)))


def hermiticity_defect(op: OperatorHandle, f: WaveFunction, g: WaveFunction) -> float:
    """|<op f, g> - <f, op g>| / (|f| |g|)."""
    f.require_same_grid(g)
    if f.grid != op.grid:
        raise GridMismatch(f"state grid {f.grid} differs from operator grid {op.grid}")
    lhs = op(f).inner(g)
    rhs = f.inner(op(g))
    return abs(lhs - rhs) / (f.norm() * g.norm())


def linearity_defect(
    op: OperatorHandle, f: WaveFunction, g: WaveFunction, alpha: complex, beta: complex
) -> float:
    combo = f.with_values(alpha * f.values + beta * g.values)
    lhs = op(combo).values
    rhs = alpha * op(f).values + beta * op(g).values
    scale = max(float(np.linalg.norm(rhs)), float(np.linalg.norm(lhs)), 1e-300)
    return float(np.linalg.norm(lhs - rhs)) / scale


__all__ = [
    "OperatorHandle",
    "SpectralKernel",
    "assemble",
    "fundamental_handles",
    "commutator_apply",
    "hermiticity_defect",
    "linearity_defect",
    "kernel_for",
]
