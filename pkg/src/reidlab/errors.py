"""Exception hierarchy.

Two families matter to callers: :class:`ConfigError` (bad input, raised
before any numerics run) and :class:`SingularityError` (the numerics hit a
genuine singularity or left the real domain). The CLI maps them to exit
codes 2 and 3 respectively.
"""

from __future__ import annotations


class ReidlabError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(ReidlabError, ValueError):
    """Invalid parameters or configuration."""


class PathTooShort(ConfigError):
    pass


class DomainMismatch(ConfigError):
    pass


class ConstraintViolated(ConfigError):
    pass


class Unsupported(ConfigError):
    pass


class ZeroA(ConfigError):
    pass


class SingularityError(ReidlabError, ArithmeticError):
    """Numerical failure tied to a location of the independent variable.

    ``where`` holds the offending abscissa (time, ``Y``, ``Qtilde``...) when
    it is known.
    """

    def __init__(self, message: str, where: float | None = None):
        if where is not None:
            message = f"{message} (at {where:.17g})"
        super().__init__(message)
        self.where = where


class StepLimitExceeded(SingularityError):
    pass


class NonFiniteState(SingularityError):
    pass


class NonFiniteIntegrand(SingularityError):
    pass


class IntegrationFailed(SingularityError):
    pass


class SingularQ(SingularityError):
    pass


class SingularQtilde(SingularityError):
    pass


class SingularRtilde(SingularityError):
    pass


class SingularR(SingularityError):
    pass


class NonpositiveY(SingularityError):
    pass


class NonpositiveTau(SingularityError):
    pass


class NonpositiveP(SingularityError):
    pass


class NegativeRadicand(SingularityError):
    pass


class NoRealBranch(SingularityError):
    pass


class DegenerateU(SingularityError):
    pass
