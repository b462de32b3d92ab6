"""Exception hierarchy shared by all kuni modules."""


class KuniError(Exception):
    """Base class for all errors raised by this package."""


# --- finite field -----------------------------------------------------------

class NonPrimeP(KuniError):
    pass


class ReducibleModulus(KuniError):
    pass


class UnsupportedSize(KuniError):
    pass


class DivisionByZero(KuniError):
    pass


class SpecMismatch(KuniError):
    pass


class NotSquare(KuniError):
    pass


# --- codes ------------------------------------------------------------------

class RankDeficient(KuniError):
    pass


class TooLarge(KuniError):
    pass


class OutOfRange(KuniError):
    pass


class RankDrop(KuniError):
    pass


class DegenerateCoordinate(KuniError):
    pass


# --- decomposition ----------------------------------------------------------

class BadKernelDimension(KuniError):
    pass


class CertificationFailed(KuniError):
    pass


class NotFound(KuniError):
    pass


# --- states -----------------------------------------------------------------

class OrderMismatch(KuniError):
    pass


class SizeMismatch(KuniError):
    pass


class ShapeMismatch(KuniError):
    pass


class LayoutMismatch(KuniError):
    pass


class UnknownName(KuniError):
    pass


class CertificationMissing(KuniError):
    pass


class SupportBelowRankBound(KuniError):
    pass


class NonPrimeQ(KuniError):
    pass


class FormatError(KuniError):
    """Malformed matrix / code / state file."""
