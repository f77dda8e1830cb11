"""Exception hierarchy."""


class QfiTeleportError(Exception):
    """Base class for all package errors."""


class OutOfRange(QfiTeleportError, ValueError):
    """A scalar parameter lies outside its declared domain."""


class NotHermitian(QfiTeleportError, ValueError):
    pass


class InvalidState(QfiTeleportError, ValueError):
    """Input matrix is not a valid density matrix."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class Unphysical(InvalidState):
    """An X-state resource whose coefficients give a non-PSD matrix."""


class BlochOutOfBall(QfiTeleportError, ValueError):
    pass


class DegenerateDenominator(QfiTeleportError, ArithmeticError):
    pass


class DZero(QfiTeleportError, ValueError):
    """Threshold undefined because the channel is noiseless."""


class ConfigError(QfiTeleportError, ValueError):
    pass
