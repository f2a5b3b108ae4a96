"""
Errors
======

Exception hierarchy shared by the model, runtime, solvers and tools.
"""


class PcdError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(PcdError):
    """A configuration value is missing or out of range."""


class ExpressionSyntaxError(PcdError):
    """A cost expression string does not follow the prefix grammar."""


class DivisionByZero(PcdError, ZeroDivisionError):
    """A Div node was evaluated with a zero denominator."""


class InvalidInstance(PcdError):
    """An instance failed validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        details = "; ".join(v["description"] for v in self.violations)
        super().__init__(f"invalid instance: {details}")


class DisconnectedGraph(PcdError):
    """The constraint graph cannot be spanned from the chosen root."""


class ProtocolError(PcdError):
    """A message was lost, duplicated or delivered in the wrong phase."""


class DeadlockDetected(ProtocolError):
    """An agent waits for a message that was never sent."""


class MissingMessage(ProtocolError):
    """An agent callback ran without all of the messages it needs."""


class DegenerateWeights(PcdError):
    """Crossover weights cannot be normalised (all local fitness values are zero)."""


class GenerationFailed(PcdError):
    """A benchmark generator ran out of retries."""


class TooLarge(PcdError):
    """A grid search exceeds its size guard."""


class UnknownVariant(PcdError):
    """A solver variant name is not configured."""
