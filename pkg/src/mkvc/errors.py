"""Exception types shared across the package."""


class MkvcError(ValueError):
    """Any domain error raised by instances, solvers, or the harness."""


class ParseError(MkvcError):
    """Malformed instance file; carries the 1-based offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
