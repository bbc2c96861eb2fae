from __future__ import annotations

from ncuncertainty.algebra.maps import (
    commutator_closure,
    expand_r,
    forward_map,
    inverse_map,
    r_squared_coefficient,
    r_symbol,
)
from ncuncertainty.algebra.params import AlgebraParams, derive_constants
from ncuncertainty.algebra.symbols import (
    FUNDAMENTAL,
    HEISENBERG_WEYL,
    OperatorSymbol,
    Tag,
    base,
    commutator,
)

__all__ = [
    "AlgebraParams",
    "derive_constants",
    "OperatorSymbol",
    "Tag",
    "FUNDAMENTAL",
    "HEISENBERG_WEYL",
    "base",
    "commutator",
    "commutator_closure",
    "forward_map",
    "inverse_map",
    "expand_r",
    "r_symbol",
    "r_squared_coefficient",
]
