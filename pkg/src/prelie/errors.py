"""Exception hierarchy.

Every error carries a short message; a few carry extra structured fields
(parse position, offending block) that the CLI turns into diagnostics.
"""


class PreLieError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(PreLieError):
    pass


class SingularMatrix(PreLieError):
    pass


class NotPreLie(PreLieError):
    pass


class InvalidBimodule(PreLieError):
    pass


class NotNijenhuis(PreLieError):
    pass


class NotOOperator(PreLieError):
    pass


class NotRotaBaxter(PreLieError):
    pass


class NotNijenhuisStructure(PreLieError):
    pass


class NotDeformationPair(PreLieError):
    pass


class NotCompatible(PreLieError):
    pass


class NotSubalgebra(PreLieError):
    def __init__(self, message, block=None, pair=None):
        super().__init__(message)
        self.block = block
        self.pair = pair


class NotStrongMC(PreLieError):
    pass


class NotOnStructure(PreLieError):
    pass


class NotSymmetric(PreLieError):
    pass


class ComponentCheckFailed(PreLieError):
    def __init__(self, message, component=None, report=None):
        super().__init__(message)
        self.component = component
        self.report = report


class RouteDisagreement(PreLieError):
    """Two independent computations of the same statement gave different answers."""


class SpaceMismatch(PreLieError):
    pass


class ShapeMismatch(PreLieError):
    pass


class SearchSpaceTooLarge(PreLieError):
    pass


class ConstraintUnsatisfiable(PreLieError):
    pass


class ParseError(PreLieError):
    def __init__(self, message, line=None, col=None):
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.col = col


class ValidationError(PreLieError):
    pass


class CheckMismatch(PreLieError):
    pass
