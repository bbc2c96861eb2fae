from __future__ import annotations

from ncuncertainty.wdw.ode import (
    OdeSolution,
    TailProxy,
    envelope_exponent,
    ode_residual,
    solve_zero_energy,
    tail_l2_proxy,
)
from ncuncertainty.wdw.potentials import (
    MinimumResult,
    PotentialKind,
    PotentialSpec,
    find_minimum,
    potential_eval,
)
from ncuncertainty.wdw.separated import assemble_separated

__all__ = [
    "PotentialKind",
    "PotentialSpec",
    "potential_eval",
    "find_minimum",
    "MinimumResult",
    "OdeSolution",
    "TailProxy",
    "solve_zero_energy",
    "ode_residual",
    "envelope_exponent",
    "tail_l2_proxy",
    "assemble_separated",
]
