"""Exception types shared across the library."""


class ModeHarvestError(Exception):
    """Base class for all library-specific errors."""


class UnsupportedOrderError(ModeHarvestError):
    """Special-function order beyond the recurrence stability guard."""


class KindMismatchError(ModeHarvestError):
    """Operation called with the wrong potential kind."""


class InvalidModeError(ModeHarvestError):
    """Mode index invalid for the given potential."""


class UnsupportedModeError(ModeHarvestError):
    """Mode/kind combination outside the implemented transforms."""


class GapMismatchError(ModeHarvestError):
    """Cross-detector term requested for detectors with different gaps."""


class SwitchingMismatchError(ModeHarvestError):
    """Cross-detector term requested for detectors with different switchings."""


class ToleranceError(ModeHarvestError):
    """Quadrature did not reach the requested tolerance.

    Carries the residual error estimate in ``residual``.
    """

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual estimate {residual:.3e})")
        self.residual = residual


class InconsistentInputError(ModeHarvestError):
    """Inputs violate a structural invariant (non-finite scalars, bad trace)."""


class UnstablePotentialError(ModeHarvestError):
    """Lattice potential produced a non-positive normal-mode frequency."""


class StepSizeError(ModeHarvestError):
    """Covariance integrator step does not resolve the fastest mode."""


class TruncationFailureError(ModeHarvestError):
    """Series truncation guard exceeded before convergence.

    Carries the partial result in ``partial``.
    """

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


class ConfigError(ModeHarvestError):
    """Run configuration failed validation.  Message carries the field path."""
