"""
Custom exceptions for gpsav
"""


class GpSavError(Exception):
    """Base exception for all gpsav errors"""
    pass


class InvalidArgumentError(GpSavError, ValueError):
    """Argument outside the accepted domain (sizes, intervals, grids, steps)"""
    pass


class OracleSizeError(InvalidArgumentError):
    """Dense reference requested on a grid beyond the size guard"""
    pass


class UnsupportedOperationError(GpSavError):
    """Operation not defined for this configuration (e.g. rotation in 1D)"""
    pass


class IntegrationError(GpSavError):
    """Failure while advancing the SAV state in time"""

    def __init__(self, message: str, step_index: int | None = None):
        super().__init__(message)
        self.step_index = step_index

    def at_step(self, step_index: int) -> "IntegrationError":
        """Attach the index of the failing step and return self"""
        self.step_index = step_index
        return self

    def __str__(self) -> str:
        message = super().__str__()
        if self.step_index is None:
            return message
        return f"step {self.step_index}: {message}"


class StepDivergedError(IntegrationError):
    """Fixed-point iteration for the stage slopes did not reach tolerance"""

    def __init__(
        self,
        message: str,
        residual: float,
        iterations: int,
        step_index: int | None = None,
    ):
        super().__init__(message, step_index)
        self.residual = residual
        self.iterations = iterations


class NumericalBlowupError(IntegrationError):
    """NaN or Inf appeared in the iterates or a field"""
    pass


class UndefinedRateError(GpSavError):
    """Convergence rate requested across a zero or negative error"""
    pass


class ConfigError(GpSavError):
    """Configuration error"""
    pass


class SnapshotFormatError(GpSavError):
    """Snapshot file is malformed or does not match the expected grid"""
    pass


class UnknownIntegrandError(GpSavError):
    """Quadrature catalog has no integrand with this id"""
    pass
