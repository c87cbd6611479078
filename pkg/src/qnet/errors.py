"""Exception hierarchy.

Everything raised on purpose derives from :class:`QnetError`.  The CLI maps
:class:`ParseError` to exit code 2 and every other :class:`QnetError` to 1.
"""


class QnetError(Exception):
    """Base class for domain errors."""


class ParseError(QnetError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionError(QnetError, ValueError):
    pass


class GateIndexError(QnetError, IndexError):
    pass


# stabilizer construction
class TableauError(QnetError):
    pass


class NonCommuting(TableauError):
    pass


class Dependent(TableauError):
    pass


class ImaginarySign(TableauError):
    pass


class WrongCount(TableauError):
    pass


# network validation
class ValidationError(QnetError):
    pass


class OverlappingEdges(ValidationError):
    pass


class UncoveredVertex(ValidationError):
    pass


class CircuitOutOfScope(ValidationError):
    pass


class BadWeights(ValidationError):
    pass


class ZeroProbabilityEvent(QnetError):
    pass


class ShapeMismatch(QnetError, ValueError):
    pass


# lhv / canonical
class NotCanonical(QnetError):
    pass


class MixedSourcePresent(NotCanonical):
    pass


class NotTwoNetwork(QnetError):
    pass


class BadPartition(QnetError):
    pass


class Infeasible(QnetError):
    """A linear system that theory guarantees solvable had no solution."""


class EnumerationTooLarge(QnetError):
    pass


class TooLong(QnetError):
    pass


# oracle
class TooManyQubits(QnetError):
    pass


class NotTracePreserving(QnetError):
    pass


class NotCompletelyPositive(QnetError):
    pass
