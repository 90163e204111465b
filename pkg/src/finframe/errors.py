"""Exception hierarchy shared by every module."""


class FinframeError(Exception):
    """Base class for all library errors."""


class ParseError(FinframeError, ValueError):
    """Malformed poset description; carries a 1-based line/column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column or 1}: {message}"
        super().__init__(message)


class DuplicateName(ParseError):
    pass


class UnknownName(ParseError):
    pass


class InvalidName(ParseError):
    pass


class CycleDetected(FinframeError, ValueError):
    """The declared relation is not antisymmetric."""

    def __init__(self, a, b):
        self.witness = (a, b)
        super().__init__(f"cycle between {a!r} and {b!r}")


class NotMeetClosed(FinframeError, ValueError):
    def __init__(self, a, b):
        self.witness = (a, b)
        super().__init__(f"no greatest lower bound for {{{a}, {b}}}")


class NotALattice(FinframeError, ValueError):
    def __init__(self, a, b):
        self.witness = (a, b)
        super().__init__(f"no least upper bound for {{{a}, {b}}}")


class NotDistributive(FinframeError, ValueError):
    pass


class NotBounded(FinframeError, ValueError):
    pass


class NotBoundedDistributive(FinframeError, ValueError):
    pass


class NotZeroDimensional(FinframeError, ValueError):
    pass


class NotSupMorphism(FinframeError, ValueError):
    pass


class NotABase(FinframeError, ValueError):
    pass


class PreconditionViolated(FinframeError, ValueError):
    pass


class TooLarge(FinframeError):
    pass


class SpecInfeasible(FinframeError):
    pass


class UnknownTheorem(FinframeError, KeyError):
    def __str__(self):
        return f"unknown theorem: {self.args[0]!r}"
