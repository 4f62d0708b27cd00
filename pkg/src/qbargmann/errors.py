"""Exception hierarchy shared by every layer of the package."""


class QSeriesError(ArithmeticError):
    """Base class for numerical failures raised by this package."""


class TruncationExceeded(QSeriesError):
    """An infinite sum or product hit ``max_terms`` before its tail bound."""


class Divergence(QSeriesError):
    """A nonterminating series was requested outside its disc of convergence."""


class PoleError(QSeriesError, ZeroDivisionError):
    """A denominator Pochhammer factor vanished inside the summation range."""


class DomainError(QSeriesError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class UnknownIdentity(KeyError):
    """The requested identity is not in the registry."""
