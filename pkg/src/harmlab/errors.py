"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A run configuration is malformed; the message names the offending key."""


class MonotonicityError(ValueError):
    """A trajectory violates the strict monotonicity needed for a transform."""


class SeriesStartError(ValueError):
    """No regular power-law branch exists at the origin for this profile."""


class AdjudicationInconclusiveError(RuntimeError):
    """Neither sign variant's residual vanishes under grid refinement."""


class SweepError(RuntimeError):
    """A parameter sweep could not be completed; carries the failing stage."""
