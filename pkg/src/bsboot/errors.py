"""Shared exception and warning types."""


class BsbootError(Exception):
    """Base class for all package-specific errors."""


class IngestionError(BsbootError, ValueError):
    """A data file could not be parsed into a valid dataset."""


class NumericDomainError(BsbootError, ValueError):
    """A numeric routine was handed values outside its domain."""


class BracketingError(BsbootError, ValueError):
    """Root-finding bracket does not contain the target."""


class DegenerateConfigurationError(BsbootError, ValueError):
    """The posterior or a derived quantity is degenerate (e.g. exhausted mass)."""


class UnsupportedConfigurationError(BsbootError, ValueError):
    """The requested procedure does not support this data configuration."""


class EvaluationError(BsbootError, ValueError):
    """A functional could not be evaluated on a draw."""


class DegenerateConfigurationWarning(UserWarning):
    """The configuration is legal but statistically degenerate."""
