from __future__ import annotations

from ncuncertainty.modspace.norms import (
    NormEquivalenceReport,
    SandwichConstants,
    modulation_norm,
    norm_alpha_sq,
    norm_B_sq,
    norm_equivalence_report,
    sandwich_constants,
    window_constants,
)
from ncuncertainty.modspace.stft import StftGrid, StftLattice, default_window, stft
from ncuncertainty.modspace.weights import Weight, WeightKind, weight_checks, weight_eval

__all__ = [
    "Weight",
    "WeightKind",
    "weight_eval",
    "weight_checks",
    "StftLattice",
    "StftGrid",
    "stft",
    "default_window",
    "modulation_norm",
    "norm_alpha_sq",
    "norm_B_sq",
    "sandwich_constants",
    "SandwichConstants",
    "norm_equivalence_report",
    "NormEquivalenceReport",
    "window_constants",
]
