"""Exception types shared across the package."""


class HardyError(Exception):
    """Base class for all package errors."""


class ComposedPoleAtOrigin(HardyError):
    """A rational map (or a composition) has a pole at z = 0."""


class DepthMismatch(HardyError):
    pass


class DepthInsufficient(HardyError):
    """The truncation tail cannot be pushed below tolerance within the depth cap."""

    def __init__(self, message, tail=None, depth=None):
        super().__init__(message)
        self.tail = tail
        self.depth = depth


class NotInDisk(HardyError, ValueError):
    pass


class NotUnimodular(HardyError, ValueError):
    pass


class NotAutomorphism(HardyError, ValueError):
    pass


class PoleAt(HardyError):
    pass


class PoleInsideRadius(HardyError):
    pass


class NotInner(HardyError):
    pass


class ZeroVector(HardyError, ValueError):
    pass


class FixedPointAtOrigin(HardyError, ValueError):
    """The order-3 obstruction is undefined for rotations (fixed point 0)."""


class SingularSystem(HardyError):
    pass


class InternalMismatch(HardyError):
    """Independent computation routes disagree beyond tolerance."""
