"""Exception types shared across planeforge modules."""


class PlaneforgeError(Exception):
    """Base class for all planeforge errors."""


class NotPrime(PlaneforgeError, ValueError):
    pass


class TooLarge(PlaneforgeError, ValueError):
    pass


class DivisionByZero(PlaneforgeError, ZeroDivisionError):
    pass


class UnsupportedOrder(PlaneforgeError, ValueError):
    pass


class InvalidPlane(PlaneforgeError, ValueError):
    pass


class CertificateFailed(PlaneforgeError):
    def __init__(self, row, col, value, expected):
        self.row, self.col, self.value, self.expected = row, col, value, expected
        super().__init__(
            f"Gram entry ({row}, {col}) is {value}, expected {expected}")


class EmptySubset(PlaneforgeError, ValueError):
    pass


class TooLargeForExhaustive(PlaneforgeError, ValueError):
    pass


class FaceNotInComplex(PlaneforgeError, KeyError):
    pass


class IllegalStep(PlaneforgeError, ValueError):
    pass


class BudgetExceeded(PlaneforgeError):
    pass


class LabelMismatch(PlaneforgeError, ValueError):
    pass


class DimensionMismatch(PlaneforgeError, ValueError):
    pass


class DimensionUnsupported(PlaneforgeError, ValueError):
    pass
