"""Shared exception types."""


class ConfigurationError(ValueError):
    """Invalid configuration value (bad sizes, counts, weights, policies)."""
