"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class InterchangeError(Exception):
    """Base class for all errors raised by this package."""


class CapExceededError(InterchangeError):
    """A group or an enumeration is larger than the configured size cap."""


class GroupTableError(InterchangeError, ValueError):
    """A Cayley table does not describe a group.

    ``kind`` is one of ``"shape"``, ``"range"``, ``"missing-identity"``,
    ``"missing-inverse"``, ``"non-latin"``, ``"non-associative"``; ``witness``
    holds the offending element(s).
    """

    def __init__(self, kind: str, message: str, witness: tuple = ()):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.witness = witness


class NotAbelianError(InterchangeError, ValueError):
    pass


class InvalidMapError(InterchangeError, ValueError):
    """A map is not a homomorphism / automorphism of the group it claims."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class NotImageCommutingError(InterchangeError, ValueError):
    """``witness = (x, y)`` with ``eps(x) + eta(y) != eta(y) + eps(x)``."""

    def __init__(self, witness: tuple[int, int]):
        x, y = witness
        super().__init__(f"pair is not image-commuting: witness x={x}, y={y}")
        self.witness = witness


class InterchangeLawError(InterchangeError, ValueError):
    """``witness = (w, x, y, z)`` with ``(w+x).(y+z) != w.y + x.z``."""

    def __init__(self, witness: tuple[int, int, int, int]):
        super().__init__(f"interchange law fails at (w, x, y, z) = {witness}")
        self.witness = witness


class InvalidPairError(InterchangeError, ValueError):
    """The pair lacks a property an operation requires (commuting, idempotent)."""


class CrossValidationError(InterchangeError, AssertionError):
    """Structural and exhaustive evaluation of the same property disagree."""


class NotIdealError(InterchangeError, ValueError):
    pass


class SpecParseError(InterchangeError, ValueError):
    """A group spec or pair spec string could not be parsed."""
