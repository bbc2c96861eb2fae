from __future__ import annotations

from ncuncertainty.uncertainty.entropy import EntropyReport, entropic_check, gaussian_1d
from ncuncertainty.uncertainty.functionals import (
    NullificationResult,
    UncertaintyReport,
    functional_F,
    nullifying_translation,
    robertson,
    robertson_general,
    scale_infimum,
)
from ncuncertainty.uncertainty.gaussian import (
    gaussian_closed_forms,
    gaussian_moments,
    hpw_limit,
    hpw_sweep,
    minimal_length_probe,
)
from ncuncertainty.uncertainty.pairs import ALL_PAIRS, PairAlpha
from ncuncertainty.uncertainty.scaling import ScalingReport, scaling_demo

__all__ = [
    "PairAlpha",
    "ALL_PAIRS",
    "UncertaintyReport",
    "NullificationResult",
    "functional_F",
    "robertson",
    "robertson_general",
    "nullifying_translation",
    "scale_infimum",
    "gaussian_closed_forms",
    "gaussian_moments",
    "hpw_limit",
    "hpw_sweep",
    "minimal_length_probe",
    "ScalingReport",
    "scaling_demo",
    "EntropyReport",
    "entropic_check",
    "gaussian_1d",
]
