"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A scalar parameter is outside its admissible range."""


class GridMismatchError(ValueError):
    """Two fields that must share a grid do not."""


class ValidationError(ValueError):
    """A state violates a structural invariant (e.g. realness)."""


class ConfigError(ValueError):
    """A run or study configuration is malformed."""


class BlowUpError(FloatingPointError):
    """A time step produced non-finite coefficients."""

    def __init__(self, message="non-finite coefficients", step=None):
        self.step = step
        if step is not None:
            message = f"{message} (step {step})"
        super().__init__(message)
