"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured work limit."""

    def __init__(self, message, limit=None):
        super().__init__(message)
        self.limit = limit
