"""Exception types shared across the package."""


class RbmatchError(Exception):
    """Base class for every error raised by this package."""


class NodeOutOfRange(RbmatchError):
    pass


class SelfLoop(RbmatchError):
    pass


class DisconnectedGraph(RbmatchError):
    pass


class InvalidParams(RbmatchError):
    pass


class MalformedLine(RbmatchError):
    pass


class AllZeroMatrix(RbmatchError):
    pass


class InvalidExponent(RbmatchError):
    pass


class ItemOutOfRange(RbmatchError):
    pass


class InvalidCost(RbmatchError):
    pass


class InvariantViolation(RbmatchError):
    """Post-state check failed; signals an implementation bug, not bad input."""


class InstanceTooLarge(RbmatchError):
    pass


class ConfigError(RbmatchError):
    pass
