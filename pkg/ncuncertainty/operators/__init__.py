from __future__ import annotations

from ncuncertainty.core.models import GridSpec
from ncuncertainty.operators.assemble import (
    OperatorHandle,
    assemble,
    commutator_apply,
    fundamental_handles,
    hermiticity_defect,
    linearity_defect,
)
from ncuncertainty.operators.checks import (
    AlgebraReport,
    ReconstructionReport,
    reconstruct_hw,
    verify_algebra,
)

__all__ = [
    "GridSpec",
    "OperatorHandle",
    "assemble",
    "commutator_apply",
    "fundamental_handles",
    "hermiticity_defect",
    "linearity_defect",
    "AlgebraReport",
    "ReconstructionReport",
    "verify_algebra",
    "reconstruct_hw",
]
