"""Exception hierarchy shared by the whole package."""


class QtsymError(Exception):
    """Base class for every error raised deliberately by this package."""


class DomainError(QtsymError, ArithmeticError):
    """Input outside an operator's domain (zero denominator, bad cell, ...)."""


class DegreeBoundError(QtsymError):
    """A computation would exceed the configured symmetric-function degree bound."""

    def __init__(self, needed: int, bound: int, what: str = "computation"):
        self.needed = needed
        self.bound = bound
        super().__init__(
            f"{what} needs degree {needed} but the configured bound is {bound}; "
            f"raise max_degree to proceed"
        )


class EvalPointError(QtsymError, ZeroDivisionError):
    """A denominator vanished at a numeric evaluation point."""


class ExactDivisionError(QtsymError, ArithmeticError):
    """An exact division that theory guarantees failed; indicates a real bug."""


class ParseError(QtsymError, ValueError):
    """Syntax error in the operator expression language."""

    def __init__(self, message: str, line: int, column: int, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        hint = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at line {line}, column {column}{hint}")


class ExprTypeError(QtsymError, TypeError):
    """Well-formed but ill-typed operator expression (bad literal shape,
    a non-operator composed with '.', an operator with nothing to act on)."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


class CheckFailure(QtsymError):
    """Raised internally when a verification check cannot even be evaluated."""
