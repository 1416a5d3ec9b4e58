"""Exception hierarchy shared by every module."""


class StableHarmError(Exception):
    """Base class for all library errors."""


class ParameterDomainError(StableHarmError, ValueError):
    """(alpha, rho) outside the admissible range, or an unsupported conversion."""


class DomainError(StableHarmError, ValueError):
    """A point argument violates an operation's precondition."""


class NotApplicableError(StableHarmError):
    """The quantity is not defined for this process class."""


class DivergenceError(StableHarmError, ArithmeticError):
    """The requested integral or series diverges."""


class AccuracyError(StableHarmError, ArithmeticError):
    """A numerical routine could not reach its tolerance.

    The best estimate and its error bound are kept so callers can decide
    whether to accept them.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf"), **diagnostics):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.diagnostics = diagnostics


class ContractError(StableHarmError, ValueError):
    """A caller-supplied object breaks a documented contract."""
