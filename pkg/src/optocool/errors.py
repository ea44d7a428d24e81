"""Exception hierarchy.

Numerical failures (divergence, missing fixed points, unstable steady
states) derive from :class:`NumericalError`; the CLI maps them to exit
status 2. Configuration problems derive from :class:`ConfigError`.
"""


class OptocoolError(Exception):
    """Base class for all errors raised by this package."""


class ChirpWithoutDissipation(OptocoolError, ValueError):
    """A chirped drive was paired with zero dissipative coupling.

    The chirp constraint fixes the drive only through the term
    proportional to the dissipative strength, so it has no solution
    when that strength vanishes.
    """


class NegativeOccupation(OptocoolError, ValueError):
    pass


class NumericalError(OptocoolError, RuntimeError):
    pass


class Diverged(NumericalError):
    """Integration blew up (state magnitude above the guard threshold)."""


class NoConvergence(NumericalError):
    pass


class NoStationaryState(NumericalError):
    pass


class IllConditioned(NumericalError):
    """The fundamental matrix became too ill-conditioned to invert."""


class ConfigError(OptocoolError, ValueError):
    pass


class ParseError(ConfigError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class MissingKey(ConfigError):
    pass


class ConflictingDriveKeys(ConfigError):
    pass
