"""Exception hierarchy.

Two families: :class:`ConfigError` for rejected inputs and
:class:`NumericalError` for solver failures. The CLI maps them to exit
codes 2 and 3.
"""


class PQSpecError(Exception):
    """Base class for every error raised by :mod:`pqspec`."""


class ConfigError(PQSpecError, ValueError):
    """Invalid user input."""


class NumericalError(PQSpecError, ArithmeticError):
    """A numerical procedure failed to deliver a result."""


class InvalidExponents(ConfigError):
    pass


class InvalidDomain(ConfigError):
    pass


class InvalidScale(ConfigError):
    pass


class EmptySelection(ConfigError):
    pass


class TooManyVariants(ConfigError):
    pass


class DivergentTail(ConfigError):
    pass


class InvalidSpectrum(ConfigError):
    """Eigenvalue lists that are empty, unsorted or not positive."""


class MalformedInput(ConfigError):
    """An input file could not be parsed."""


class NoZeroFound(NumericalError):
    pass


class StepFailure(NumericalError):
    pass


class BracketFailure(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class BudgetExceeded(NumericalError):
    pass


class InsufficientPoints(NumericalError):
    pass


class NormalizationDrift(NumericalError):
    pass
