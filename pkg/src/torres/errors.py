"""Exception hierarchy shared across the package."""


class TorresError(Exception):
    """Base class for all domain errors raised by torres."""


class InvalidConfiguration(TorresError):
    """Input data violates a structural requirement (named in the message)."""


class SingularPointError(TorresError):
    """A point that must be generic lies on a wall."""

    def __init__(self, message: str, sigma=None):
        super().__init__(message)
        self.sigma = sigma


class NotSumRegularError(TorresError):
    """A vector lies on a hyperplane spanned by partial sums of the configuration."""


class ConsistencyError(TorresError):
    """Two independent computations of the same quantity disagree."""


class SearchExhausted(TorresError):
    """A bounded search ran out of candidates."""

    def __init__(self, message: str, bound=None):
        super().__init__(message)
        self.bound = bound


class NearSingularError(TorresError):
    """A numeric denominator is too close to zero to be trusted."""

    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point
