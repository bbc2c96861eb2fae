from __future__ import annotations

from ncuncertainty.core.models import WaveFunction
from ncuncertainty.states.constructors import (
    GaussianSpec,
    boundary_mass,
    check_support,
    from_function,
    gaussian,
    hermite_superposition,
    random_smooth,
    seeded_rng,
)
from ncuncertainty.states.io import load_state, save_state
from ncuncertainty.states.measure import (
    dispersion,
    expectation,
    expectation_with_defect,
    require_normalized,
)
from ncuncertainty.states.transforms import dilate, embed, fourier, inverse_fourier, translate

__all__ = [
    "WaveFunction",
    "GaussianSpec",
    "gaussian",
    "hermite_superposition",
    "random_smooth",
    "from_function",
    "boundary_mass",
    "check_support",
    "seeded_rng",
    "fourier",
    "inverse_fourier",
    "dilate",
    "translate",
    "embed",
    "expectation",
    "expectation_with_defect",
    "dispersion",
    "require_normalized",
    "save_state",
    "load_state",
]
