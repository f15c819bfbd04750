"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the chart domain or otherwise geometrically invalid."""


class SingularParameterError(ZeroDivisionError):
    """A coefficient formula hit a vanishing denominator."""

    def __init__(self, expression: str, t: float, value: float):
        self.expression = expression
        self.t = t
        self.value = value
        super().__init__(f"{expression} = {value!r} vanishes at t = {t!r}")


class InadmissiblePointError(ValueError):
    """The metric blocks are not positive definite at the requested point."""


class FiniteDifferenceError(ArithmeticError):
    """Two Richardson levels disagree: the step is too small or too large."""


class ConfigError(ValueError):
    """Malformed verification configuration."""


class LowDimensionWarning(UserWarning):
    """n = 2, where the integrability argument does not force constant curvature."""
