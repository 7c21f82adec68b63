"""Exception hierarchy shared by the simulator modules."""


class QDChoiceError(Exception):
    """Base class for all errors raised by this package."""


class InvalidModeError(QDChoiceError, ValueError):
    """A path-mode index lies outside ``[0, d)`` or indices collide."""


class InvalidDimensionError(QDChoiceError, ValueError):
    pass


class DimensionMismatchError(QDChoiceError, ValueError):
    pass


class NotUnitaryError(QDChoiceError, ValueError):
    pass


class DegeneratePostselectionError(QDChoiceError, ArithmeticError):
    """The conditioning event has (numerically) zero probability."""


class UndefinedVisibilityError(QDChoiceError, ArithmeticError):
    pass


class ParseError(QDChoiceError):
    """Bench text could not be parsed.

    Attributes:
        line: 1-based number of the offending input line.
        reason: human readable description.
    """

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason
