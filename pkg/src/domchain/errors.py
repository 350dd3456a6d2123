"""Exception hierarchy shared by every domchain module."""


class DomchainError(Exception):
    """Base class for all library errors."""


class NonCoprimeModuli(DomchainError, ValueError):
    pass


class FeasibilityExceeded(DomchainError):
    """A computation would exceed a configured size or sieve cap."""


class SizeCap(FeasibilityExceeded):
    pass


class TooLarge(FeasibilityExceeded):
    pass


class OutOfRangeVertex(DomchainError, IndexError):
    pass


class DuplicateVertex(DomchainError, ValueError):
    pass


class TooShort(DomchainError, ValueError):
    pass


class BadQ(DomchainError, ValueError):
    pass


class BadPrimes(DomchainError, ValueError):
    pass


class HypothesisViolated(DomchainError, ValueError):
    pass


class WitnessSearchFailed(DomchainError, RuntimeError):
    pass


class SpecParseError(DomchainError, ValueError):
    pass
