"""
Error types for SkinLock.

Every error carries the process exit code the command line reports for it:
0 ok, 1 validation failure, 2 numeric or parameter error, 3 infeasibility.
"""

from typing import Dict, Optional, Tuple


class SkinLockError(Exception):
    """Base class for all SkinLock errors."""

    exit_code = 2


class ParameterError(SkinLockError, ValueError):
    """Invalid model, pump or solver parameter."""


class SiteIndexError(SkinLockError, IndexError):
    """Site, cell or mode index outside the valid range."""


class StabilityError(SkinLockError):
    """Relaxation matrix has a relaxation rate with non-positive real part."""


class DegeneracyError(SkinLockError):
    """Relaxation matrix is numerically defective."""

    def __init__(self, message: str, pair: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.pair = pair


class DecompositionError(SkinLockError):
    """An eigendecomposition failed or its input has the wrong structure."""


class EnvelopeOverflowError(SkinLockError):
    """Exponential skin envelope cannot be represented in double precision."""


class RegimeError(SkinLockError):
    """Quantity requested outside the parameter regime where it is defined."""


class NormalizationError(SkinLockError):
    """Vector or density cannot be normalized, or was expected normalized."""


class SolveError(SkinLockError):
    """Linear system of the Lyapunov equation is singular."""


class StepSizeError(SkinLockError):
    """Fixed-step integration became unstable or drifted."""


class DarkSourceError(SkinLockError):
    """Pump site does not load the requested mode."""


class ScaleError(SkinLockError):
    """Problem too large for a brute-force routine."""


class ConvergenceError(SkinLockError):
    """Iteration did not reach its target within its budget."""


class ScanPointError(SkinLockError):
    """
    A single scan point failed.

    Attributes:
        point: Scan coordinate (site index or g value) that failed
        cause: The underlying SkinLock error
    """

    def __init__(self, point, cause: SkinLockError):
        super().__init__(f"scan failed at {point}: {cause}")
        self.point = point
        self.cause = cause
        self.exit_code = cause.exit_code


class InfeasibilityError(SkinLockError):
    """
    Sufficient condition of a local jump decomposition is violated.

    Attributes:
        deficits: Map from site label to the amount by which the residual
            onsite loss weight falls below zero
    """

    exit_code = 3

    def __init__(self, message: str, deficits: Optional[Dict[str, float]] = None):
        self.deficits = dict(deficits or {})
        if self.deficits:
            worst = max(self.deficits, key=self.deficits.get)
            message = (f"{message}; {len(self.deficits)} infeasible site(s), "
                       f"worst {worst} short by {self.deficits[worst]:.6g}")
        super().__init__(message)


class ValidationFailure(SkinLockError):
    """
    A recomputed quantity disagrees with its target.

    Attributes:
        quantity: Name of the compared quantity
        entry: (row, column) of the largest deviation
        deviation: Size of the largest deviation
    """

    exit_code = 1

    def __init__(self, message: str, quantity: str = "",
                 entry: Optional[Tuple[int, int]] = None, deviation: float = 0.0):
        super().__init__(message)
        self.quantity = quantity
        self.entry = entry
        self.deviation = deviation
