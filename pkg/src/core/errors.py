"""Exceptions raised across the warp-drive compiler."""

from typing import Optional


class WarpDriveError(RuntimeError):
    pass


class NotUnitary(WarpDriveError):
    def __init__(self, residual: float, message: Optional[str] = None):
        self.residual = float(residual)
        super().__init__(message or f"matrix is not unitary (residual {self.residual:.3e})")


class NotSpecialUnitary(WarpDriveError):
    pass


class NegativeDuration(WarpDriveError):
    pass


class NotLocal(WarpDriveError):
    def __init__(self, residual: float):
        self.residual = float(residual)
        super().__init__(f"matrix is not a tensor product of one-qubit gates (residual {residual:.3e})")


class FactorizationFailure(WarpDriveError):
    pass


class NonCanonicalCoordinates(WarpDriveError):
    pass


class OutOfRangeAlpha(WarpDriveError):
    pass


class InvalidPulse(WarpDriveError):
    pass


class MatrixParseError(WarpDriveError):
    pass


class ProgramParseError(WarpDriveError):
    pass


class ConfigError(WarpDriveError):
    pass


class VerificationFailure(WarpDriveError):
    def __init__(self, distance: float, tolerance: float):
        self.distance = float(distance)
        self.tolerance = float(tolerance)
        super().__init__(
            f"compiled program misses its target: distance {distance:.3e} > tolerance {tolerance:.1e}"
        )
