"""Exception types shared across the package."""


class ConfigError(Exception):
    """Raised when a run configuration fails to parse or validate.

    Carries the offending line number when the problem is tied to a
    specific line of the config file (``line`` is None otherwise).
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StabilityFault(RuntimeError):
    """Time integration blew up or violated the step-size bound."""

    def __init__(self, message, time=None, index=None):
        self.time = time
        self.index = index
        super().__init__(message)


class IntegrationFault(RuntimeError):
    """Non-finite field value detected; carries the grid index."""

    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message)


class BilinearRealityError(ValueError):
    """A bilinear that must be real (or purely imaginary) is not.

    On the float backend this signals corrupted input, not roundoff:
    the tolerance is far above accumulation level.
    """


class SubalgebraError(ValueError):
    """Matrix is not of the form alpha*1 + beta*I."""


class NotASpinElementError(ValueError):
    """spin_to_lorentz input does not induce a real Lorentz matrix."""


class AmplitudeCollapseError(RuntimeError):
    """Frequency probe component dropped below the usable amplitude."""


class UnsupportedLagrangianError(ValueError):
    """No Lagrangian is defined for the requested nonlinearity."""
