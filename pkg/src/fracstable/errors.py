"""Exception types shared across the package.

Plain ``ValueError`` is used for invalid arguments everywhere; the classes
here cover failure modes that carry numerical context.
"""


class AccuracyError(RuntimeError):
    """A numerical routine could not certify the requested tolerance.

    Carries the best available estimate and the error bound that was
    actually achieved, so callers can decide whether to accept it.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class DegenerateRootsError(ValueError):
    """Raised when a closed form requires distinct roots but got a collision."""
