"""Exception hierarchy shared by the whole package."""


class LatticeEdgeworthError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(LatticeEdgeworthError, ValueError):
    """Malformed input: bad probabilities, out-of-range indices, bad config."""


class OrderExceededError(ValidationError):
    """A derivative or expansion order above the configured maximum."""


class SeriesDomainError(ValidationError):
    """A power-series operation outside its domain (for example log of a series with c0 = 0)."""


class DegenerateVarianceError(ValidationError):
    """An expansion was requested for a sum whose variance is zero."""


class ZeroCharacteristicError(ValidationError):
    """A quotient by a characteristic-function value that is exactly zero."""


class HypothesisError(ValidationError):
    """The hypotheses of a closed-form correction do not hold for the given model."""


class ResourceGuardError(LatticeEdgeworthError):
    """A requested computation exceeds the configured size budget."""
