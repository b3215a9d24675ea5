"""Exception types raised across the package."""


class ContractionError(ValueError):
    """A matrix that should be a contraction has operator norm above 1."""


class CommutationError(ValueError):
    """Two matrices that should commute do not, within tolerance."""


class AdmissibilityError(ValueError):
    """An operator family violates the unit bound on its Gram sums."""


class DivergenceError(ArithmeticError):
    """An improper integral that defines a quantity diverges."""


class ConfigError(ValueError):
    """A suite configuration is malformed or names an unknown suite."""
