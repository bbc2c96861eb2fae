"""Commutator closure and the symplectomorphism to Heisenberg-Weyl variables."""

from __future__ import annotations

from typing import Dict

from ncuncertainty.algebra.params import AlgebraParams
from ncuncertainty.algebra.symbols import (
    FUNDAMENTAL,
    HEISENBERG_WEYL,
    OperatorSymbol,
    Tag,
    base,
)
from ncuncertainty.core.errors import DomainError, UnsupportedSymbol


def _as_tag(s: OperatorSymbol | Tag | str) -> Tag:
    if isinstance(s, Tag):
        return s
    if isinstance(s, str):
        return Tag.parse(s)
    return s.tag


def r_symbol(params: AlgebraParams) -> OperatorSymbol:
    """R = epsilon (Q1 + theta/(1+sqrt(1-xi)) P2)."""
    return params.epsilon * (base(Tag.Q1) + params.r_ratio * base(Tag.P2))


def expand_r(symbol: OperatorSymbol, params: AlgebraParams) -> OperatorSymbol:
    return symbol.substitute({Tag.R: r_symbol(params)})


def commutator_closure(
    params: AlgebraParams,
    i: OperatorSymbol | Tag | str,
    j: OperatorSymbol | Tag | str,
    *,
    keep_r: bool = False,
) -> OperatorSymbol:
    """Right-hand side of [i, j] for fundamental generators.

    With ``keep_r`` the composite keeps R as a generator; otherwise R is expanded in
    terms of Q1 and P2 (so it disappears identically at epsilon = 0).
    """
    ti, tj = _as_tag(i), _as_tag(j)
    for t in (ti, tj):
        if t not in FUNDAMENTAL:
            raise UnsupportedSymbol(f"{t.value} is not one of Q1, Q2, P1, P2")
    if ti == tj:
        return OperatorSymbol.zero()

    one = OperatorSymbol.identity()
    r = base(Tag.R)
    s = params.s
    table: Dict[frozenset, tuple] = {
        frozenset((Tag.Q1, Tag.Q2)): ((Tag.Q1, Tag.Q2), 1j * params.theta * (one + params.theta * r)),
        frozenset((Tag.P1, Tag.P2)): (
            (Tag.P1, Tag.P2),
            1j * (params.eta * one + (1.0 + s) ** 2 * r),
        ),
        frozenset((Tag.Q1, Tag.P1)): ((Tag.Q1, Tag.P1), 1j * (one + params.theta * (1.0 + s) * r)),
        frozenset((Tag.Q2, Tag.P2)): ((Tag.Q2, Tag.P2), 1j * (one + params.theta * (1.0 + s) * r)),
    }
    entry = table.get(frozenset((ti, tj)))
    if entry is None:
        return OperatorSymbol.zero()
    (first, _), rhs = entry
    if ti != first:
        rhs = -rhs
    if keep_r:
        return rhs.simplify()
    return expand_r(rhs, params)


def forward_map(params: AlgebraParams, s: OperatorSymbol | Tag | str) -> OperatorSymbol:
    """Express Q1, Q2, P1, P2 through X1, X2, Xi1, Xi2."""
    t = _as_tag(s)
    x1, x2, k1, k2 = (base(t_) for t_ in HEISENBERG_WEYL)
    lam, mu = params.lambda_, params.mu
    if t is Tag.Q1:
        return lam * x1 - params.a_coef * k2 + params.E * (x1 * x1)
    if t is Tag.Q2:
        return lam * x2 + params.a_coef * k1
    if t is Tag.P1:
        return mu * k1 + params.b_coef * x2
    if t is Tag.P2:
        return mu * k2 - params.b_coef * x1 + params.F * (x1 * x1)
    raise UnsupportedSymbol(f"forward_map is defined for Q1, Q2, P1, P2; got {t.value}")


def r_squared_coefficient(params: AlgebraParams) -> float:
    """Coefficient of R^2 in the inverse image of Xi2: -F mu / (epsilon^2 (1 - xi))."""
    if params.epsilon == 0.0:
        raise DomainError("the R^2 coefficient is undefined at epsilon = 0")
    return -params.F * params.mu / (params.epsilon**2 * params.s**2)


def inverse_map(
    params: AlgebraParams, s: OperatorSymbol | Tag | str, *, use_r: bool = True
) -> OperatorSymbol:
    """Express X1, X2, Xi1, Xi2 through Q1, Q2, P1, P2 (and R for Xi2).

    For epsilon = 0, or when ``use_r`` is False, the R^2 term of Xi2 is written in the
    cancelled form -(F/(mu (1-xi))) (mu Q1 + theta/(2 lambda) P2)^2, which is finite.
    """
    t = _as_tag(s)
    q1, q2, p1, p2 = (base(t_) for t_ in FUNDAMENTAL)
    sq = params.s
    lam, mu = params.lambda_, params.mu
    a, b = params.a_coef, params.b_coef
    if t is Tag.X1:
        return (1.0 / sq) * (mu * q1 + a * p2)
    if t is Tag.X2:
        return (1.0 / sq) * (mu * q2 - a * p1)
    if t is Tag.XI1:
        return (1.0 / sq) * (lam * p1 - b * q2)
    if t is Tag.XI2:
        linear = (1.0 / sq) * (lam * p2 + b * q1)
        if params.F == 0.0:
            return linear
        if use_r and params.epsilon > 0.0:
            r = base(Tag.R)
            return linear + r_squared_coefficient(params) * (r * r)
        combo = mu * q1 + a * p2
        return linear - (params.F / (mu * sq**2)) * (combo * combo)
    raise UnsupportedSymbol(f"inverse_map is defined for X1, X2, Xi1, Xi2; got {t.value}")


__all__ = [
    "r_symbol",
    "expand_r",
    "commutator_closure",
    "forward_map",
    "inverse_map",
    "r_squared_coefficient",
]
