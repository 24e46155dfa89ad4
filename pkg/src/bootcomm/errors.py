class UndefinedStatisticError(ValueError):
    """A sample statistic whose denominator vanishes for the given data."""


class ConfigError(ValueError):
    """Invalid or unparseable experiment configuration."""
