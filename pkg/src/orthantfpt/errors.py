"""Exception types raised across the package."""


class ParameterError(ValueError):
    """A numeric argument is outside its admissible range."""


class ShapeError(ValueError):
    """An array has the wrong length or dimension."""


class FormatError(ValueError):
    """Input data (covariance tables, boundary files) is malformed."""


class NumericalError(ArithmeticError):
    """Base class for failures of the numerical kernels."""


class NotPositiveDefinite(NumericalError):
    """Cholesky or Durbin-Levinson hit a non-positive pivot."""


class NotNonNegativeDefinite(NumericalError):
    """The circulant embedding has a negative eigenvalue."""


class DegenerateCorrelation(NumericalError):
    """A correlation of one makes the exchangeable bound degenerate."""
