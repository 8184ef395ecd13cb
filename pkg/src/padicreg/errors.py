"""Exception types raised by the package."""


class PadicRegError(Exception):
    pass


class NegativeDiscriminant(PadicRegError):
    pass


class NotFundamentalDiscriminant(PadicRegError):
    pass


class UnsupportedClassNumber(PadicRegError):
    pass


class RamifiedP(PadicRegError):
    pass


class DegenerateCone(PadicRegError):
    pass


class UnsupportedExponent(PadicRegError):
    pass


class BadSmoothingPrime(PadicRegError):
    pass


class IncompatibleCongruences(PadicRegError):
    pass


class NoRootInSupportedExtension(PadicRegError):
    pass


class ZeroInput(PadicRegError):
    pass


class UnboundedSupport(PadicRegError):
    pass


class NonIntegerMass(PadicRegError):
    pass


class NormalizationRequired(PadicRegError):
    pass


class PrecisionExhausted(PadicRegError):
    pass


class SmoothingUnit(PadicRegError):
    pass


class ZeroDenominator(PadicRegError):
    pass


class UnsupportedRank(PadicRegError):
    pass


class RouteDisagreement(PadicRegError):
    pass


class InstanceError(PadicRegError):
    pass
