"""Exception types raised by the cutting kernel."""


class CutkitError(Exception):
    """Base class for every error raised by cutkit."""


class SingularDifferential(CutkitError):
    """Differentiating a coefficient in ``s`` would produce ``s**(-1/2)``."""

    def __init__(self, term, message=None):
        self.term = term
        super().__init__(message or f"d/ds of the s^(1/2) term {term!r} is singular at s=0")


class ResidualNegativePower(CutkitError):
    """A blowup pullback left a negative power of ``s`` after cancellation."""

    def __init__(self, terms):
        self.terms = list(terms)
        super().__init__(f"negative s-powers survive cancellation: {self.terms!r}")


class NotBasicInvariant(CutkitError):
    def __init__(self, witness):
        self.witness = list(witness)
        super().__init__(f"form is not basic on the boundary and invariant: {self.witness!r}")


class NonDescendingCoefficient(CutkitError):
    def __init__(self, key, offending):
        self.key = key
        self.offending = list(offending)
        super().__init__(f"coefficient of {key!r} does not descend; offending modes {self.offending!r}")


class ModelMismatch(CutkitError):
    pass


class DomainError(CutkitError):
    """A point lies outside the model domain (for instance ``s < 0``)."""


class DegenerateA(CutkitError):
    def __init__(self, point, sigma_min):
        self.point = point
        self.sigma_min = sigma_min
        super().__init__(f"A(t,0) has smallest singular value {sigma_min:.3e} at t={point!r}")


class NonInvariantInput(CutkitError):
    def __init__(self, component, deviation, message=None):
        self.component = component
        self.deviation = deviation
        super().__init__(
            message
            or f"{component} depends on x other than through |x|^2 (deviation {deviation:.3e})"
        )


class DegenerateFrame(CutkitError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"frame wedge vanishes at {point!r}")


class InvalidInput(CutkitError):
    pass
