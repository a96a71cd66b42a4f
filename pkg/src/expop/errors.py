"""Exception types raised by the numerical routines."""


class ExpopError(Exception):
    """Base class for all numerical failures in this package."""


class DomainError(ExpopError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class WindowNotFound(ExpopError):
    """The integrand does not decay enough to find a finite integration window."""


class NotConverged(ExpopError):
    """Adaptive quadrature exhausted its panel budget before meeting tolerance."""


class GrowthTooFast(ExpopError):
    """A growth certificate is too weak for the kernel's decay at this point."""


class DerivativeOrderUnsupported(ExpopError, ValueError):
    """Requested kernel derivative order is above the supported cap."""
