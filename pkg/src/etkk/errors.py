"""Exception hierarchy.

Every error carries ``input_error``: True when the cause is a malformed or
inconsistent document (CLI exit code 2), False when it is a well-formed
negative outcome (exit code 1).
"""


class EtkkError(ValueError):
    input_error = True

    def __init__(self, message: str = "", **details):
        super().__init__(message)
        self.details = details


class MalformedDocument(EtkkError):
    pass


class UnitalityViolation(EtkkError):
    pass


class ZeroColumn(EtkkError):
    pass


class NonpositiveSize(EtkkError):
    pass


class WrongKind(EtkkError):
    pass


class BadParameter(EtkkError):
    pass


class DimensionMismatch(EtkkError):
    pass


class NotCommutative(EtkkError):
    pass


class SourceTargetMismatch(EtkkError):
    pass


class BlockMismatch(EtkkError):
    pass


class CardinalityMismatch(EtkkError):
    pass


class InteriorMismatch(EtkkError):
    pass


class BadGrid(EtkkError):
    pass


class GridMismatch(EtkkError):
    pass


class FiberDimMismatch(EtkkError):
    pass


class BoundaryMismatch(EtkkError):
    pass


class NotInK0(EtkkError):
    pass


class NotInK0Plus(EtkkError):
    pass


class WitnessSpacingMismatch(EtkkError):
    pass


# Negative outcomes on well-formed input.

class NotPositive(EtkkError):
    input_error = False


class NotKKEqual(EtkkError):
    input_error = False


class DensityViolation(EtkkError):
    input_error = False


class HypothesisViolation(EtkkError):
    input_error = False


class PreconditionUnmet(EtkkError):
    input_error = False


class DistributionNotFound(EtkkError):
    input_error = False


class InequalityFailed(EtkkError):
    input_error = False


class CompositionCheckFailed(EtkkError):
    input_error = False
