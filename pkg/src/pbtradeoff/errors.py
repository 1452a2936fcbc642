"""Exception hierarchy shared across the package."""


class TradeoffError(Exception):
    """Base class for all errors raised by pbtradeoff."""


class ConfigError(TradeoffError, ValueError):
    """Invalid scenario, fading family or parameter."""


class DomainError(TradeoffError, ValueError):
    """Argument outside the domain where a formula is defined."""


class UnsupportedDomainError(DomainError):
    """Fading law outside the Gumbel (Type I) domain of attraction."""


class NumericalError(TradeoffError, ArithmeticError):
    """A numerical procedure failed (non-finite values, no convergence)."""


class LimitFailure(NumericalError):
    """A limit ladder did not settle; carries the last two iterates."""

    def __init__(self, message, iterates=()):
        super().__init__(message)
        self.iterates = tuple(iterates)


class DegenerateRegimeError(NumericalError):
    """A closed-form denominator is nonpositive for the given parameters."""

    def __init__(self, message, term=None, value=None):
        super().__init__(message)
        self.term = term
        self.value = value


class EmptyCurveError(TradeoffError, ValueError):
    """Every point of a requested curve had zero spectral efficiency."""
