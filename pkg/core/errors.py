"""
Error hierarchy for the Ahlfors toolkit
Every error carries the exit code the CLI maps it to
"""

from typing import Any, Optional


class AhlforsError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1


# Input errors (exit code 2)

class InputError(AhlforsError):
    """Malformed or invalid input supplied by the caller."""

    exit_code = 2


class InvalidParameterError(InputError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class TooFewSamplesError(InvalidParameterError):
    """Boundary discretization requested with too few points."""


class BranchPointError(InvalidParameterError):
    """Square root requested at its branch point 0."""


class OutOfDomainError(InvalidParameterError):
    """Evaluation point lies outside the closed domain."""


class MarginError(InvalidParameterError):
    """Target value too close to the unit circle for a reliable count."""


class GeometryError(InputError, ValueError):
    """Domain geometry violates its invariants."""


class HoleExceedsOuterError(GeometryError):
    """A hole's closed disk reaches outside the outer circle."""


class HoleTouchesOuterError(GeometryError):
    """A hole's closed disk touches the outer circle."""


class OverlappingHolesError(GeometryError):
    """Two holes intersect or touch."""


class OverlappingSlitsError(GeometryError):
    """Two slit intervals intersect or touch."""


class EmptySlitSetError(GeometryError):
    """A slit set without intervals."""


class DegenerateIntervalError(GeometryError):
    """A slit interval of non-positive length."""


class DomainSpecError(InputError):
    """A JSON domain specification that cannot be parsed."""


class UnsupportedVariantError(InputError):
    """Operation not available for the given domain variant."""


class PreconditionViolationError(InputError):
    """A sampled precondition check failed."""


# Numerical errors (exit code 3)

class NumericalError(AhlforsError):
    """A numerical procedure could not deliver a trustworthy result."""

    exit_code = 3


class NearSingularityError(NumericalError):
    """Evaluation point too close to a singular set."""


class NumericalInstabilityError(NumericalError):
    """Two resolutions of the same quantity disagree."""


class ResolutionError(NumericalError):
    """A counting integral is not close enough to an integer."""


class InternalSolverError(NumericalError):
    """The inner linear program reported an impossible status."""


class NonConvergenceError(NumericalError):
    """Iterative solver stopped without meeting its tolerances."""

    def __init__(self, message: str, best: Optional[Any] = None):
        super().__init__(message)
        self.best = best
