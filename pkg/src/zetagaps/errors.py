"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class ZetaGapsError(Exception):
    exit_code = 1


class ValidationError(ZetaGapsError, ValueError):
    """Input rejected by a precondition or structural check."""

    exit_code = 2


class DomainError(ValidationError):
    pass


class ArgumentError(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyInputError(ValidationError):
    pass


class IntegrityError(ValidationError):
    pass


class DegenerateIntervalError(ValidationError):
    pass


class FetchError(ZetaGapsError, OSError):
    exit_code = 2


class CoverageError(ZetaGapsError, LookupError):
    """The ordinate table does not extend far enough for the request."""

    exit_code = 3


class NumericError(ZetaGapsError, ArithmeticError):
    exit_code = 4


class ConvergenceError(NumericError):
    pass


class PoleError(NumericError):
    pass


