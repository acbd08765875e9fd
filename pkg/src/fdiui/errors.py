"""Exception types raised by the library."""


class FdiuiError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FdiuiError, ValueError):
    """An argument lies outside the domain of the operation."""


class EmptyRequestError(DomainError):
    """A sampler or Monte Carlo engine was asked for zero draws."""


class DegenerateChannelError(DomainError):
    """The downlink channel vanishes, so no suppression coefficient exists."""


class InstabilityError(FdiuiError, ArithmeticError):
    """The retransmission loop 1/(1 - residual_si*h) is at or near its pole."""


class SolverError(FdiuiError, RuntimeError):
    """A root finder failed to bracket or converge."""


class IciError(FdiuiError, ValueError):
    """Path memory exceeds the cyclic prefix; the per-bin model no longer holds."""
