"""Exception hierarchy shared by all modules."""


class GeometryError(ValueError):
    """Base class for every error raised by finite_steiner."""


# field arithmetic
class NonPrime(GeometryError):
    pass


class CompositeModulus(GeometryError):
    pass


class DivisionByZero(GeometryError, ZeroDivisionError):
    pass


class SquareGenerator(GeometryError):
    pass


class ZeroElement(GeometryError):
    pass


# incidence structure
class DuplicatePoints(GeometryError):
    pass


class BadIncidence(GeometryError):
    pass


class SameCircle(GeometryError):
    pass


class WrongType(GeometryError):
    pass


# tangency
class ZeroRadiusParam(GeometryError):
    pass


class EqualCircles(GeometryError):
    pass


class DegenerateMu(GeometryError):
    pass


class NotTangent(GeometryError):
    pass


class NonSquareRatio(GeometryError):
    pass


# chains and capacitance
class NotUnitNorm(GeometryError):
    pass


class NoChain(GeometryError):
    """No proper chain exists; ``order`` carries the rotor order when one was computed."""

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order


class NotConcyclic(GeometryError):
    pass


class UnsupportedK(GeometryError):
    pass


class NotDisjoint(GeometryError):
    pass


class NonSquareDiscriminant(GeometryError):
    pass


# verification
class VerificationError(GeometryError):
    pass


class FixtureMismatch(VerificationError):
    """Golden data disagrees with the computed plane; ``item`` names the first mismatch."""

    def __init__(self, item, expected, actual):
        super().__init__(f"{item}: expected {expected}, got {actual}")
        self.item = item
        self.expected = expected
        self.actual = actual
