from __future__ import annotations

from enum import Enum
from typing import Tuple

from ncuncertainty.algebra.params import AlgebraParams
from ncuncertainty.algebra.symbols import OperatorSymbol, Tag, base
from ncuncertainty.core.errors import UnsupportedSymbol


class PairAlpha(str, Enum):
    """The pairs (u, v) for which the uncertainty functional is studied."""

    Q1Q2 = "q1q2"
    P1P2 = "p1p2"
    Q1P1 = "q1p1"
    Q2P2 = "q2p2"

    @property
    def tags(self) -> Tuple[Tag, Tag]:
        return _TAGS[self]

    @property
    def u(self) -> OperatorSymbol:
        return base(self.tags[0])

    @property
    def v(self) -> OperatorSymbol:
        return base(self.tags[1])

    @property
    def label(self) -> str:
        u, v = self.tags
        return f"({u.value},{v.value})"

    def hamiltonian_symbol(self) -> OperatorSymbol:
        """u u + v v."""
        return self.u * self.u + self.v * self.v

    def closure_coefficients(self, params: AlgebraParams) -> Tuple[float, float]:
        """(c0, c1) with [u, v] = i (c0 + c1 R)."""
        s = params.s
        if self is PairAlpha.Q1Q2:
            return params.theta, params.theta**2
        if self is PairAlpha.P1P2:
            return params.eta, (1.0 + s) ** 2
        return 1.0, params.theta * (1.0 + s)

    @classmethod
    def parse(cls, name: str) -> "PairAlpha":
        key = str(name).strip().lower().replace(",", "").replace("(", "").replace(")", "")
        for p in cls:
            if p.value == key:
                return p
        raise UnsupportedSymbol(
            f"unknown pair {name!r}; expected one of {[p.value for p in cls]}", module="uncertainty"
        )


_TAGS = {
    PairAlpha.Q1Q2: (Tag.Q1, Tag.Q2),
    PairAlpha.P1P2: (Tag.P1, Tag.P2),
    PairAlpha.Q1P1: (Tag.Q1, Tag.P1),
    PairAlpha.Q2P2: (Tag.Q2, Tag.P2),
}

ALL_PAIRS = tuple(PairAlpha)

__all__ = ["PairAlpha", "ALL_PAIRS"]
