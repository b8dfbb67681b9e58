"""Exception types shared across the package."""


class FidzeroError(Exception):
    """Base class for all package-specific failures."""


class DimensionCapError(FidzeroError):
    """Requested system exceeds the configured Hilbert-space cap."""


class ParityCommutationError(FidzeroError):
    """Operator does not commute with the parity operator (construction bug)."""


class DegenerateModeError(FidzeroError):
    """cos k == h within tolerance: the Bogoliubov angle is undefined."""


class SolverError(FidzeroError):
    """Eigensolver failed to converge; carries the best residual seen."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class EmptyZeroSetError(FidzeroError):
    """No usable zeros to select from (widen the scan box)."""


class FitError(FidzeroError):
    """Scaling fit failed (rank-deficient design or non-finite inputs)."""
