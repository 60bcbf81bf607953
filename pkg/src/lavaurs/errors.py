"""Exception types shared across the toolkit."""


class LavaursError(Exception):
    """Base class for toolkit-specific failures."""


class NotCertifiedError(LavaursError):
    """A point could not be certified inside the filled Julia set.

    This is a statement about the computation, not the point: boundary
    points and escaping points both end up here, the former because no
    finite budget certifies them.
    """


class PrecisionError(LavaursError):
    """A numerical routine failed to reach its requested accuracy."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ResourceLimitError(LavaursError):
    """A computation exceeded an explicit level/depth budget."""
