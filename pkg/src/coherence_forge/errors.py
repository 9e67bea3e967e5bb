"""Exception hierarchy.

Every error raised by the library derives from :class:`CoherenceError`, which
is itself a ``ValueError`` so callers validating input can catch either.
"""


class CoherenceError(ValueError):
    pass


# numeric core
class NotSquare(CoherenceError):
    pass


class NotHermitian(CoherenceError):
    pass


class NotPSD(CoherenceError):
    pass


class RankExceedsD(CoherenceError):
    pass


# bounds
class CongruenceViolated(CoherenceError):
    pass


class InconsistentDesignParameters(CoherenceError):
    pass


# designs
class NotPrime(CoherenceError):
    pass


class WrongResidueClass(CoherenceError):
    pass


class NoValidRuleFound(CoherenceError):
    pass


# packings
class UnsupportedK(CoherenceError):
    pass


class FeatureDisabled(CoherenceError):
    pass


class UnsupportedDimension(CoherenceError):
    pass


class OrderMismatch(CoherenceError):
    pass


class NotEquiangular(CoherenceError):
    pass


class InvalidBattery(CoherenceError):
    pass


class InvalidETF(CoherenceError):
    pass


class NoConstructionAvailable(CoherenceError):
    pass


# measures
class DegenerateSupport(CoherenceError):
    pass


class NotIsotropic(CoherenceError):
    pass


class EmptySupport(CoherenceError):
    pass


# certification
class SizeMismatch(CoherenceError):
    pass


class SeedSpectrumMismatch(CoherenceError):
    """A lift seed's numerically computed top eigenvalue or its multiplicity
    disagrees with the value the construction guarantees."""
