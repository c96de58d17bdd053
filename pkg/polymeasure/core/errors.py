"""Exception hierarchy shared by the core modules.

Every error names the invariant it guards; the CLI prints it as
``error: <invariant>: <message>``.
"""

from typing import Optional


class PolyMeasureError(ValueError):
    """Base class for all domain errors."""

    invariant = "polymeasure"

    def __init__(self, message: str, invariant: Optional[str] = None):
        super().__init__(message)
        if invariant is not None:
            self.invariant = invariant


class ExpressionSyntaxError(PolyMeasureError):
    invariant = "syntax"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class EmptyExpressionError(PolyMeasureError):
    invariant = "empty-expression"


class IndexRangeError(PolyMeasureError):
    invariant = "index-range"


class DimensionMismatchError(PolyMeasureError):
    invariant = "dimension"


class CapExceededError(PolyMeasureError):
    invariant = "cap"


class StateValidationError(PolyMeasureError):
    """Raised when a matrix fails the density-matrix invariants."""

    invariant = "density-matrix"

    def __init__(self, report):
        super().__init__(report.describe())
        self.report = report


class NotHermitianError(PolyMeasureError):
    invariant = "hermitian"


class NotPositiveSemidefiniteError(PolyMeasureError):
    invariant = "psd"


class NonHomogeneousError(PolyMeasureError):
    invariant = "homogeneous"


class NumericalInvariantError(PolyMeasureError):
    invariant = "numerical"


class ShotCountError(PolyMeasureError):
    invariant = "shots"


class InvalidRecipeError(PolyMeasureError):
    invariant = "recipe"


class PermutationLimitError(PolyMeasureError):
    invariant = "permutations"
