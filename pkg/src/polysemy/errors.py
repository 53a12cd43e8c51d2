"""Exception hierarchy. Each class carries the CLI exit status it maps to."""


class PolysemyError(Exception):
    exit_code = 1


class UsageError(PolysemyError, ValueError):
    exit_code = 2


class DataError(PolysemyError, ValueError):
    """Malformed or unusable input data (spectrum files, spectra)."""

    exit_code = 3


class ParseError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptySpectrumError(DataError):
    pass


class InsufficientClassesError(DataError):
    pass


class DegenerateClassError(DataError):
    pass


class DomainError(PolysemyError, ValueError):
    exit_code = 3


class InfeasibleError(PolysemyError, ValueError):
    exit_code = 4


class NumericalError(PolysemyError, ArithmeticError):
    exit_code = 5


class BracketError(NumericalError):
    pass


class NoSolutionError(NumericalError):
    pass


class FitFailureError(NumericalError):
    pass
