"""Exception hierarchy shared by every module."""


class NaryError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(NaryError, ValueError):
    pass


class NegativeExponent(NaryError, ValueError):
    pass


class OrderTooLarge(NaryError, ValueError):
    pass


class SingularMatrix(NaryError, ValueError):
    pass


class InfeasibleCounts(NaryError, ValueError):
    pass


class IndexOutOfRange(NaryError, ValueError):
    pass


class WeightMismatch(NaryError, ValueError):
    pass


class BadPartition(NaryError, ValueError):
    pass


class UnknownProperty(NaryError, ValueError):
    pass


class NotABasisFamily(NaryError, ValueError):
    pass


class NoLimit(NaryError, ValueError):
    pass


class NotKSubalgebra(NaryError, ValueError):
    pass


class BadK(NaryError, ValueError):
    pass


class PreconditionError(NaryError, ValueError):
    """An operation was called on a structure outside its domain."""


class Subalgebraic(PreconditionError):
    pass


class NotFormAlgebra(PreconditionError):
    pass


class SearchExhausted(NaryError, RuntimeError):
    """A seeded randomized search used up its retry budget."""

    def __init__(self, message, *, attempts=None, seed=None):
        super().__init__(message)
        self.attempts = attempts
        self.seed = seed


class ScheduleInvalid(NaryError, RuntimeError):
    pass


class InvariantBroken(NaryError, RuntimeError):
    """An intermediate result violated a proven invariant; indicates a bug."""


class UnsupportedArity(NaryError, ValueError):
    pass


class ZeroTuple(NaryError, ValueError):
    pass


class ConstraintViolation(NaryError, ValueError):
    pass


class ParseError(NaryError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class Inconclusive(NaryError, RuntimeError):
    """A recognizer could not reach a definite verdict within its search budget."""
