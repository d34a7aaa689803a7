"""Exception hierarchy shared by all modules."""


class RelcohError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(RelcohError):
    """A constructed object violates one of its structural invariants."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        self.detail = detail
        msg = f"invariant '{invariant}' failed"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class ParseError(RelcohError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class ShapeError(RelcohError):
    pass


class ContainmentError(RelcohError):
    pass


class NotExactError(RelcohError):
    pass


class SquareError(RelcohError):
    pass


class BoundError(RelcohError):
    pass


class NotInvertible(RelcohError):
    pass


class HypothesisFailed(RelcohError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NotFlabby(RelcohError):
    pass


class NoFullSet(RelcohError):
    pass


class NotCovering(RelcohError):
    pass


class NotClosed(RelcohError):
    pass


class NotContaining(RelcohError):
    pass


class NotProductType(RelcohError):
    pass


class NotCocycle(RelcohError):
    pass


class NotCoboundary(RelcohError):
    pass


class NotContinuous(RelcohError):
    pass


class NotMorphism(RelcohError):
    pass


class NotOpen(ValidationError):
    def __init__(self, detail: str = ""):
        super().__init__("open sets are up-sets", detail)
