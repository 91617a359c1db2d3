"""Exception types raised by the simulator."""


class CavReviveError(Exception):
    """Base class for all simulator errors."""


class CutoffTooSmall(CavReviveError):
    """The Fock cutoff cannot represent a state to the required accuracy.

    The offending probability mass is kept on ``leakage``.
    """

    def __init__(self, message, leakage=float("nan")):
        super().__init__(message)
        self.leakage = leakage


class NotSymmetric(CavReviveError):
    """A multi-qubit state has weight outside the permutation-symmetric subspace."""


class InvalidDensity(CavReviveError):
    """A matrix is not a valid density matrix."""


class BasinOutOfRange(CavReviveError):
    """Basin parameter ``a`` lies outside the admissible disc."""


class ConfigError(CavReviveError):
    """Scenario configuration is malformed; the message names the field path."""
