"""Shared exception types."""


class ConfigurationError(ValueError):
    """A task, solver or experiment configuration violates its constraints."""


class UsageError(ValueError):
    """An operation was called outside its contract (bad arguments/state)."""
