"""Exception types raised across the package.

Everything derives from ValueError so callers that only care about
"bad input" can catch one base class; the CLI and the HTTP service map
these to exit code 2 and HTTP 400 respectively.
"""


class InvalidOrderError(ValueError):
    """Constellation or level-set order is not an admissible power of two."""


class PowerConstraintError(ValueError):
    """A near-user power coefficient falls outside the open interval (0, 0.5)."""


class ShapeError(ValueError):
    """Sequence length does not match the declared dimension."""


class ParameterError(ValueError):
    """A scalar parameter violates its stated range."""


class DegenerateChannelError(ValueError):
    """Channel gain is exactly zero, so ML metrics are constant."""


class InvalidPairError(ValueError):
    """A pairwise error quantity was requested for identical symbols."""


class ConfigError(ValueError):
    """Experiment configuration failed validation.

    Carries the offending field path so front ends can point at it.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
