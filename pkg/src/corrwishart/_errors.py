"""Exception types shared across the package."""


class SpectrumFormatError(ValueError):
    """A population-spectrum description violates a structural invariant."""


class PoleProximityError(ValueError):
    """An evaluation point sits too close to a pole of the inverse transform."""


class RootSelectionError(RuntimeError):
    """The physical branch of the fixed-point equation could not be isolated."""


class NonConvergenceError(RuntimeError):
    """An iterative or quadrature-based computation failed to converge."""
