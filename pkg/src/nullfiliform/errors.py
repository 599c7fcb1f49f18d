"""Exception types raised across the package."""


class NullFiliformError(Exception):
    """Base class for every error raised by this package."""


class DomainMismatch(NullFiliformError, TypeError):
    pass


class DivisionByZero(NullFiliformError, ZeroDivisionError):
    pass


class NonInvertible(NullFiliformError, ArithmeticError):
    """Polynomial division that does not come out exact."""


class SingularCoefficient(NullFiliformError, ArithmeticError):
    """The unknown of an affine equation has a zero coefficient."""


class DimensionMismatch(NullFiliformError, ValueError):
    pass


class NotCentral(NullFiliformError, ValueError):
    pass


class NonUnit(NullFiliformError, ValueError):
    """Automorphism parameters with A1 = 0."""


class SingularMap(NullFiliformError, ValueError):
    pass


class IndexOutOfRange(NullFiliformError, IndexError):
    pass


class InconsistentSeed(NullFiliformError, ValueError):
    """A (12)-seed lying on neither branch of the associativity constraint."""


class UnrecognizedFamily(NullFiliformError, ValueError):
    pass


class InvalidIndices(NullFiliformError, ValueError):
    pass


class SearchSpaceTooLarge(NullFiliformError, ValueError):
    def __init__(self, size, limit):
        super().__init__(f"search space of size {size} exceeds the budget {limit}")
        self.size = size
        self.limit = limit
