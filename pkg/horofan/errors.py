"""
Exception hierarchy for horofan.

Every error raised by the library derives from HorofanError and carries a
human-readable ``reason``.
"""

from typing import Optional


class HorofanError(Exception):
    """Base exception for all library errors"""

    def __init__(self, reason: str = "horofan error"):
        self.reason = reason
        super().__init__(reason)


class DimensionMismatchError(HorofanError):
    """Vectors, matrices or cones with incompatible ranks were combined"""


class NotSaturatedError(HorofanError):
    """A sublattice that must be saturated is not"""


class NotStronglyConvexError(HorofanError):
    """An operation that needs a strongly convex cone received one with lineality"""


class NotAFaceError(HorofanError):
    """A cone is not a face of the cone it was paired with"""


class ConeNotInFanError(HorofanError):
    """A coloured cone is not in the face closure of the fan it was looked up in"""


class InvalidFanError(HorofanError):
    """A (stacky) coloured fan violates one of its axioms"""


class InvalidMapError(HorofanError):
    """A pair (Phi, phi) is not a map of stacky coloured fans"""


class MismatchError(HorofanError):
    """Two maps cannot be composed, or labels do not line up"""


class CfViolationError(HorofanError):
    """Fantastack input fails one of the conditions CF1-CF4"""

    def __init__(self, reason: str = "fantastack conditions violated", failed: Optional[list] = None):
        self.failed = list(failed or [])
        super().__init__(reason)


class Cf1ViolationError(CfViolationError):
    """Colour points and the fan support do not span the ambient vector space"""


class NotANonColouredRayError(HorofanError):
    """The requested ray is not a non-coloured ray of the fan"""


class DocumentParseError(HorofanError):
    """A document is not well-formed JSON or does not match the document schema"""

    def __init__(self, reason: str, location: Optional[str] = None):
        self.location = location
        message = f"{location}: {reason}" if location else reason
        super().__init__(message)


class DocumentValidationError(HorofanError):
    """A well-formed document describes an object that violates an axiom"""

    def __init__(self, axiom: str, detail: str = ""):
        self.axiom = axiom
        message = f"{axiom}: {detail}" if detail else axiom
        super().__init__(message)
