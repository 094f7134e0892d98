"""Shared exception types."""


class CapacityError(ValueError):
    """A requested size exceeds a configured capacity limit.

    Subclasses ValueError so that callers treating capacity overruns as
    plain validation failures keep working.
    """
