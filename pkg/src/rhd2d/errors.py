"""Exception hierarchy shared across the solver."""


class RHDError(Exception):
    """Base class for all solver errors."""


class ConfigError(RHDError):
    """Invalid run configuration or boundary setup (CLI exit status 2)."""


class AdmissibilityError(RHDError, ValueError):
    """Input state violates the physical admissibility constraints."""


class PCPViolationError(RHDError):
    """A scheme produced or consumed an inadmissible state (CLI exit status 3)."""

    def __init__(self, message, cell=None, stage=None, step=None, time=None):
        super().__init__(message)
        self.cell = cell
        self.stage = stage
        self.step = step
        self.time = time


class NumericalError(RHDError, RuntimeError):
    """Iteration failure or non-finite arithmetic (CLI exit status 4)."""


class ContractViolation(RHDError, ValueError):
    """A caller broke a documented precondition of an operation."""


class InvariantViolation(RHDError, RuntimeError):
    """An internal contract that should hold by construction was broken."""
