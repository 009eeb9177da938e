"""Exception and warning types shared across the package."""


class ConfigurationError(ValueError):
    """A grid, parameter set, or run configuration violates its constraints."""


class NumericsError(RuntimeError):
    """A numerical invariant broke mid-computation (NaN, divergence, symmetry loss)."""


class PrecisionWarning(UserWarning):
    """The result is returned but a stated accuracy guard was violated."""
