"""Error hierarchy for the flow simulator."""


class StocsfError(Exception):
    """Base class for all simulator errors."""


class InvalidInputError(StocsfError, ValueError):
    """An argument violates an operation's precondition."""


class ConfigError(InvalidInputError):
    """A configuration field failed validation."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field} {message}" if field else message)
        self.field = field
        self.message = message


class NumericalStateError(StocsfError, ArithmeticError):
    """The discrete state became nonfinite or a linear solve failed."""


class BlowUpSignal(StocsfError):
    """Raised by a stepper when the length leaves (0, inf) within one step."""

    def __init__(self, reason: str, t: float | None = None):
        super().__init__(reason if t is None else f"{reason} at t={t:.6g}")
        self.reason = reason
        self.t = t
