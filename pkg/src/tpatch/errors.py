"""Exception types raised across the package."""


class PatchworkError(Exception):
    """Base class. ``exit_code`` is what the command line returns."""

    exit_code = 2


class ValidationError(PatchworkError):
    pass


class NonPrimitiveSimplex(ValidationError):
    pass


class VolumeMismatch(ValidationError):
    pass


class DanglingFace(ValidationError):
    pass


class SingularPolytope(ValidationError):
    pass


class UnknownSimplex(PatchworkError):
    pass


class DimensionMismatch(ValidationError):
    pass


class SizeMismatch(ValidationError):
    pass


class InvalidIndexSet(ValidationError):
    pass


class DegreeOverflow(PatchworkError):
    pass


class DependentBasis(PatchworkError):
    pass


class IndexOutOfRange(PatchworkError):
    pass


class BoundarySimplex(PatchworkError):
    pass


class NotAVertexOf(PatchworkError):
    pass


class NotInLine(PatchworkError):
    pass


class NotRhoUniform(PatchworkError):
    pass


class WrongDimension(PatchworkError):
    pass


class SedDimensionMismatch(ValidationError):
    pass


class UnsupportedDimension(PatchworkError):
    pass


class ResourceCap(PatchworkError):
    exit_code = 3


class TooManyVertices(ResourceCap):
    pass


class TooManyCells(ResourceCap):
    pass
