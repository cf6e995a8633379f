"""Exception hierarchy.

Errors split into two families so the command line can map them onto exit
codes: :class:`ValidationError` (bad input, exit 1) and
:class:`NumericalError` (a computation failed, exit 2).
"""


class SomorError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SomorError, ValueError):
    """Input data is malformed or inconsistent."""


class NumericalError(SomorError, ArithmeticError):
    """A numerical computation failed or produced an inconsistent result."""


# validation family

class DimensionMismatch(ValidationError):
    pass


class OddDimension(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


class InvalidParameter(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class EmptySpectrum(ValidationError):
    pass


class NonDecayingInput(ValidationError):
    pass


class FullRank(ValidationError):
    pass


# numerical family

class SingularMatrix(NumericalError):
    pass


class SingularPencil(SingularMatrix):
    pass


class SingularStepMatrix(SingularMatrix):
    pass


class ConvergenceFailure(NumericalError):
    pass


class IndefiniteMatrix(NumericalError):
    pass


class UnstablePencil(NumericalError):
    pass


class RankDeficient(NumericalError):
    pass


class NumericalInconsistency(NumericalError):
    pass
