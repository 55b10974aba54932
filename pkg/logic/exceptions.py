class LogicError(Exception):
    """Base class for every error raised by the logic engine."""


class StructureError(LogicError):
    pass


class TeamError(LogicError):
    pass


class FormatError(LogicError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        location = ""
        if source is not None:
            location = f"{source}:"
        if line is not None:
            location = f"{location}{line}:"
        super().__init__(f"{location} {message}".strip() if location else message)


class FormulaSyntaxError(LogicError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class UnknownQuantifierError(LogicError):
    pass


class UnsuitableTeamError(LogicError):
    pass


class FragmentError(LogicError):
    """The input lies outside the fragment an operation is defined on."""


class GuardExceeded(LogicError):
    pass


class RewriteError(LogicError):
    pass


class RuleNotApplicable(RewriteError):
    pass


class FormulaError(LogicError):
    """A syntactic operation was asked something its hypotheses exclude."""
