"""Exception hierarchy.

Every domain failure raised by the package derives from :class:`MfpopError`,
so the CLI can map it to exit code 1 with the class name as diagnostic.
"""


class MfpopError(ValueError):
    """Base class for domain errors."""


# Cartan data
class NotGCM(MfpopError):
    pass


class NotSymmetrizable(MfpopError):
    pass


class NonPositiveSymmetrizer(MfpopError):
    pass


class SingularCartan(MfpopError):
    pass


# polynomials
class ZeroPolynomial(MfpopError):
    pass


class NotSquarefree(MfpopError):
    pass


class HigherOrderPole(MfpopError):
    pass


# problems and tuples
class DuplicatePoints(MfpopError):
    pass


class NonDominantWeight(MfpopError):
    pass


class GramShapeMismatch(MfpopError):
    pass


class MissingGram(MfpopError):
    pass


class NonGenericTuple(MfpopError):
    pass


class NotSquarefreeDirection(MfpopError):
    pass


class ZeroMember(MfpopError):
    pass


class WronskianIdentityError(AssertionError):
    """A constructed family failed W(y_j, base) == P. Indicates a bug, not bad input."""


# exploration / oracle
class StartNotFertile(MfpopError):
    pass


class ClusteredRoots(MfpopError):
    pass


class DegreeCapRequired(MfpopError):
    pass
