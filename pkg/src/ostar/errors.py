"""Shared error types; the CLI maps each onto a distinct exit code."""


class ConfigError(ValueError):
    """Rejected configuration or group specification (exit code 2)."""


class BudgetError(RuntimeError):
    """Computation refused because it exceeds a configured bound (exit code 3)."""


class ConsistencyError(RuntimeError):
    """An exact internal cross-check failed; results cannot be trusted (exit code 4)."""
