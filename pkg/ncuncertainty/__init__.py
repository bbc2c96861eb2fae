"""ncuncertainty: numerical laboratory for a non-canonical phase-space noncommutative algebra.

Exposes package version; the domain subpackages are imported on demand.
"""

__all__ = [
    "__version__",
]

__version__ = "0.1.0"
