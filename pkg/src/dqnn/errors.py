"""Exception types shared across the package.

All argument/contract violations derive from ValueError so callers can
catch them generically; the subclasses exist so the CLI can map failure
classes to distinct exit codes.
"""


class InvalidArgumentError(ValueError):
    """An argument violates an operation's precondition."""


class DomainViolationError(InvalidArgumentError):
    """A sample's norm falls outside the configured ring domain."""


class MalformedEncodingError(InvalidArgumentError):
    """An encoded state cannot be decoded (auxiliary slot is zero, etc.)."""


class DataFormatError(ValueError):
    """A data file does not conform to its declared format."""


class SolverError(RuntimeError):
    """An iterative solver failed to converge."""


class ConfigError(ValueError):
    """A run configuration failed validation."""
