"""Error hierarchy.

Every error carries a module-qualified ``code`` (``<module>.<kind>``) that the CLI
surfaces unchanged, plus an optional ``details`` mapping for reports.
"""

from __future__ import annotations

from typing import Any, Dict, Optional


class NcuError(RuntimeError):
    kind = "error"
    default_module = "ncu"

    def __init__(
        self,
        message: str,
        *,
        module: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message)
        self.module = module or self.default_module
        self.details: Dict[str, Any] = dict(details or {})

    @property
    def code(self) -> str:
        return f"{self.module}.{self.kind}"

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"error": self.code, "message": str(self)}
        if self.details:
            payload["details"] = self.details
        return payload


class DomainError(NcuError):
    kind = "domain"
    default_module = "algebra"


class UnsupportedSymbol(NcuError):
    kind = "unsupported_symbol"
    default_module = "algebra"


class GridError(NcuError):
    kind = "grid"
    default_module = "operators"


class GridMismatch(NcuError):
    kind = "grid_mismatch"
    default_module = "operators"


class NotNormalized(NcuError):
    kind = "not_normalized"
    default_module = "states"


class ResolutionError(NcuError):
    kind = "resolution"
    default_module = "states"


class DegenerateCase(NcuError):
    kind = "degenerate_case"
    default_module = "uncertainty"


class NoConvergence(NcuError):
    kind = "no_convergence"
    default_module = "eigensolver"


class EmptyWindow(NcuError):
    kind = "empty_window"
    default_module = "modspace"


class CoverageError(NcuError):
    kind = "coverage"
    default_module = "modspace"


class NoBracket(NcuError):
    kind = "no_bracket"
    default_module = "wdw"


class StepFailure(NcuError):
    kind = "step_failure"
    default_module = "wdw"


class TooFewExtrema(NcuError):
    kind = "too_few_extrema"
    default_module = "wdw"


class FormatError(NcuError):
    """A state or config file that cannot be parsed."""

    kind = "format"
    default_module = "states"


class InvariantViolation(NcuError):
    """A checked invariant failed; the CLI maps this to exit code 2."""

    kind = "invariant_violation"
    default_module = "cli"


__all__ = [
    "NcuError",
    "DomainError",
    "UnsupportedSymbol",
    "GridError",
    "GridMismatch",
    "NotNormalized",
    "ResolutionError",
    "DegenerateCase",
    "NoConvergence",
    "EmptyWindow",
    "CoverageError",
    "NoBracket",
    "StepFailure",
    "TooFewExtrema",
    "FormatError",
    "InvariantViolation",
]
