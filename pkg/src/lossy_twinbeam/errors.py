"""Exception types raised by the library and mapped to CLI exit codes."""


class TwinBeamError(Exception):
    """Base class for library errors."""


class ParameterError(TwinBeamError, ValueError):
    """Invalid physical parameters or configuration values."""


class NonFiniteStateError(TwinBeamError, ValueError):
    """A moment state carries a NaN or infinite component."""


class GainOverflowError(TwinBeamError, ArithmeticError):
    """The stepped integrator exceeded the configured photon-number cap."""


class UnphysicalCovarianceError(TwinBeamError, ValueError):
    """A covariance matrix violates the uncertainty principle."""


class EofSearchError(TwinBeamError, RuntimeError):
    """The pure-state search found no admissible decomposition."""
