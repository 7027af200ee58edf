"""Exception hierarchy shared by all modules."""


class QSeriesError(Exception):
    """Base class for numerical failures in this package."""


class PoleProximity(QSeriesError):
    pass


class ZeroDenominator(QSeriesError):
    pass


class NonConvergence(QSeriesError):
    pass


class DegenerateParameters(QSeriesError):
    pass


class SamplerExhausted(QSeriesError):
    pass


class DomainError(QSeriesError, ValueError):
    """Arguments outside the region where an evaluator is defined.

    ``violations`` lists one human-readable message per failed condition.
    """

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations) if violations else [message]
