"""Exception hierarchy shared by all freefid modules."""


class FreeFidError(Exception):
    """Base class for every error raised by freefid."""


class NumericFailure(FreeFidError):
    """A numerical procedure could not deliver a trustworthy answer."""


class CutContact(FreeFidError):
    """A power was requested exactly on its branch cut."""


class NoConvergence(NumericFailure):
    pass


class DomainError(FreeFidError):
    """Argument outside the domain of the function."""


class PreconditionError(FreeFidError):
    pass


class DegenerateParameters(FreeFidError):
    """Connection formula singular for the given parameters."""


class NoRoute(NumericFailure):
    pass


class NearSupport(NumericFailure):
    """Quadrature point too close to the support of the measure."""


class OutsideDomain(DomainError):
    pass


class PoleOfF(NumericFailure):
    pass


class NonconvergentLadder(NumericFailure):
    pass


class MomentHorizonExceeded(FreeFidError):
    pass


class HorizonExceeded(FreeFidError):
    pass


class AlphaOne(FreeFidError):
    pass


class LadderInconclusive(NumericFailure):
    pass


class SeedFailure(NumericFailure):
    pass


class StallError(NumericFailure):
    pass


class RangeExhausted(NumericFailure):
    pass


class UnsupportedFamily(FreeFidError):
    pass


class SpecParseError(FreeFidError):
    """Malformed distribution spec string."""
