"""Exception hierarchy.

Everything raised on purpose by the library derives from :class:`GIPError`,
so callers (the CLI in particular) can map failures onto exit codes.
"""


class GIPError(Exception):
    """Base class for all library errors."""


class InvalidInstance(GIPError):
    """Raw instance data failed validation."""


class NonUnitVector(InvalidInstance):
    pass


class DuplicateDirection(InvalidInstance):
    pass


class MassMismatch(InvalidInstance):
    pass


class NonIntegerWeight(InvalidInstance):
    pass


class DimensionTooSmall(InvalidInstance):
    pass


class DimensionMismatch(InvalidInstance):
    pass


class NotWeakAleksandrov(GIPError):
    pass


class CapacityViolation(GIPError):
    pass


class InfeasibleTransport(GIPError):
    """No proper assignment exists (the positive-dot graph has no transport)."""


class NotOptimal(GIPError):
    pass


class ImproperAssignment(GIPError):
    pass


class NonFiniteInput(GIPError):
    pass


class InvalidPolytope(GIPError):
    pass


class BoundaryHit(GIPError):
    """A lambda atom sits on the boundary of two or more vertex cones."""

    def __init__(self, j, tied):
        super().__init__(f"direction u[{j}] lies on a cone boundary shared by {sorted(tied)}")
        self.j = j
        self.tied = tuple(sorted(tied))


class UnsupportedDimensionForFacets(GIPError):
    pass


class NonPositiveDot(GIPError):
    pass


class InconsistentCertificate(GIPError):
    pass


class SearchBudgetExceeded(GIPError):
    pass


class TooLarge(GIPError):
    pass


class AllNegativeInfinity(GIPError):
    pass


class InvalidSpec(GIPError):
    pass


class CollisionAfterPerturbation(GIPError):
    pass
