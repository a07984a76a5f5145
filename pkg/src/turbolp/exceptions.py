"""Exception types shared across the package."""


class TurboLPError(Exception):
    """Base class for package errors."""


class InvalidArgumentError(TurboLPError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(TurboLPError, ValueError):
    """A formula was evaluated outside the range where it is defined."""


class ResourceError(TurboLPError, RuntimeError):
    """An exhaustive search would exceed its size budget."""
