"""Exception hierarchy shared by the simulator modules."""


class GyroError(Exception):
    """Base class for every error raised by :mod:`vortexgyro`."""


class InvalidParameter(GyroError, ValueError):
    """A configuration value violates its constraint.

    ``field`` names the offending parameter so front ends can map it back
    to a config key.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class NumericalError(GyroError, RuntimeError):
    """A numerical procedure could not deliver a trustworthy result."""


class TrapTooShallowError(NumericalError):
    pass


class StiffnessError(NumericalError):
    def __init__(self, time, message=""):
        self.time = time
        super().__init__(f"integrator step size underflow at t = {time:.6g} s {message}".rstrip())


class IntegrationAccuracyError(NumericalError):
    pass


class IncompleteTransferError(NumericalError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"incomplete transfer: residual ground population {residual:.3e}")


class GridClippingError(NumericalError):
    pass


class NoSignalError(NumericalError):
    pass


class AliasingError(NumericalError):
    def __init__(self, index, increment):
        self.frame_pair = (index - 1, index)
        self.increment = increment
        super().__init__(
            f"phase increment {increment:+.4f} rad between frames {index - 1} and {index} "
            "is too close to pi to unwrap unambiguously; sample faster"
        )
