"""Exception types shared across the package."""


class PairPCAError(Exception):
    """Base class for all package-specific errors."""


class InvalidInput(PairPCAError, ValueError):
    """An argument violates a documented precondition."""


class InvalidSpec(InvalidInput):
    """A factor-model specification is internally inconsistent."""


class InvalidTruncation(InvalidInput):
    """A truncation rank is incompatible with the requested subspace size."""


class DegenerateCovariance(PairPCAError, ArithmeticError):
    """A covariance matrix carries too little variance for the requested
    operation (no positive spectrum, or rank below the target dimension)."""


class ConfigError(InvalidInput):
    """An experiment configuration file or preset override cannot be parsed."""
