"""Exception types shared across the package.

Each module raises a subclass of HwpError so the CLI can map failures to
distinct exit codes.
"""

from __future__ import annotations


class HwpError(Exception):
    """Base class for all package errors."""


class ConfigurationError(HwpError):
    """Invalid user-supplied parameters (grid sizes, config keys, ranges)."""


class MeshError(HwpError):
    """Degenerate or unsupported discrete geometry."""


class FieldDomainError(HwpError):
    """A vector field was evaluated outside its admissible region."""


class GeometryCheckError(HwpError):
    """A geometric condition cannot be certified (e.g. empty sample sets)."""


class AliasingError(HwpError):
    """Too few time samples for the requested mode range."""


class SolverError(HwpError):
    """A linear or iterative solve failed its residual/convergence contract."""

    def __init__(self, message: str, *, residual: float | None = None,
                 history: list[float] | None = None):
        super().__init__(message)
        self.residual = residual
        self.history = history or []


class AnalysisError(HwpError):
    """Invalid input to an identity/estimate verifier."""


class ClosedFormError(HwpError):
    """Invalid input to the closed-form solution families."""
