"""Exception types raised by validation and computation routines."""


class ToolkitError(ValueError):
    """Base class for every error this package raises on bad inputs."""


class NotHermitian(ToolkitError):
    pass


class NotPositive(ToolkitError):
    pass


class ExceedsIdentity(ToolkitError):
    pass


class DimensionMismatch(ToolkitError):
    pass


class NotIsometry(ToolkitError):
    pass


class NotOrthogonal(ToolkitError):
    pass


class LabelCollision(ToolkitError):
    pass


class NotResolutionOfIdentity(ToolkitError):
    pass


class MalformedLabels(ToolkitError):
    pass


class WeightInvalid(ToolkitError):
    pass


class LabelMismatch(ToolkitError):
    pass


class BadDimension(ToolkitError):
    pass


class TraceOutOfRange(ToolkitError):
    pass


class ConditioningOnNull(ToolkitError):
    pass


class IncompatibleInstrument(ToolkitError):
    pass


class UnknownLabel(ToolkitError):
    pass


class OverlappingSubsets(ToolkitError):
    pass


class InvalidInstrument(ToolkitError):
    pass


class NotUnit(ToolkitError):
    pass


class UnknownSuite(ToolkitError):
    pass


class ParseError(ToolkitError):
    pass


class InternalInconsistency(ToolkitError):
    """A quantity violated a bound that valid inputs cannot violate."""
