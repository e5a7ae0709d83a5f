"""Exception hierarchy.

Every error carries the name of the module that raised it so that the
experiment runner can report a tagged code such as ``medium.validation``.
"""

from __future__ import annotations


class PhaserecError(Exception):
    """Base class for all errors raised by the package."""

    kind = "error"

    def __init__(self, message: str, module: str = "phaserec"):
        super().__init__(message)
        self.module = module

    @property
    def code(self) -> str:
        return f"{self.module}.{self.kind}"


class ValidationError(PhaserecError, ValueError):
    kind = "validation"


class DomainError(ValidationError):
    """Argument outside the domain of a function."""

    kind = "domain"


class GeometryError(ValidationError):
    """Sample point violates the measurement geometry (e.g. inside the scatterer)."""

    kind = "geometry"


class DegeneratePairError(ValidationError):
    """Incident and outgoing wave vectors coincide, so the period is undefined."""

    kind = "degenerate_pair"


class DegenerateOffsetsError(ValidationError):
    """The two ray offsets make the 2x2 recovery system (near) singular."""

    kind = "degenerate_offsets"


class InsufficientDataError(ValidationError):
    kind = "insufficient_data"


class SolverError(PhaserecError, ArithmeticError):
    """Numerical failure of a linear solve (ill-conditioning, residual too large)."""

    kind = "solver"

    def __init__(self, message: str, module: str = "phaserec", condition: float | None = None):
        super().__init__(message, module)
        self.condition = condition
