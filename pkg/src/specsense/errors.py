"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A scenario or experiment configuration is invalid or unusable."""


class NumericFailure(RuntimeError):
    """A computation produced a non-finite statistic or probability."""
