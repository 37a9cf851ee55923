"""Exception hierarchy. Each family carries the CLI exit code it maps to."""

from typing import Optional


class RatexpError(Exception):
    """Base class; numeric failures unless a subclass says otherwise."""

    exit_code = 5


# Input problems (exit 2)

class InputError(RatexpError):
    exit_code = 2


class ParseError(InputError):
    """Model file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(f"{location}{message}")


class DimensionError(InputError):
    pass


class DimensionMismatch(DimensionError):
    """Input sequence or initial state does not fit the system it drives."""


class InvariantError(InputError):
    pass


class ZeroDelta(InputError):
    pass


class NotInImage(InputError):
    """A free parameter does not lie in the column span of Ahat."""


class CovarianceNotPSD(InputError):
    pass


# Model checks (exit 3)

class ModelCheckError(RatexpError):
    exit_code = 3


class NotRegular(ModelCheckError):
    pass


class NotWellPosed(ModelCheckError):
    pass


class NotWeaklyConsistent(ModelCheckError):
    pass


class SingularStructure(ModelCheckError):
    pass


# Nonexistence (exit 4)

class NonexistenceError(RatexpError):
    exit_code = 4


class NoSolution(NonexistenceError):
    pass


class InconsistentInitialConditions(NonexistenceError):
    pass


class SelectionFailed(NonexistenceError):
    """The stability criterion did not single out one solution."""


# Numeric failures (exit 5)

class FullRank(RatexpError):
    pass


class SamplePoleCollision(RatexpError):
    pass


class ImproperInput(RatexpError):
    pass


class HintTooSmall(RatexpError):
    pass


class AmbiguousWellPosedness(RatexpError):
    pass


class EigenvalueOnR(RatexpError):
    pass


class DefectiveUnstable(RatexpError):
    pass


class SingularAhat(RatexpError):
    pass
