from __future__ import annotations

from ncuncertainty.eigensolver.ground import (
    GroundStateResult,
    LowSpectrum,
    SolverOptions,
    ground_state,
    hamiltonian,
    q1q2_operator,
    residual,
    spectrum_low,
)
from ncuncertainty.eigensolver.probes import (
    CoherentProbeReport,
    ProbeReport,
    coherent_state_probe,
    variational_probe,
)

__all__ = [
    "SolverOptions",
    "GroundStateResult",
    "LowSpectrum",
    "ground_state",
    "hamiltonian",
    "q1q2_operator",
    "residual",
    "spectrum_low",
    "ProbeReport",
    "CoherentProbeReport",
    "variational_probe",
    "coherent_state_probe",
]
