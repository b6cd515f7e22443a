"""Shared exception types.  Every documented failure mode raises one of these."""


class NovikovForgeError(Exception):
    """Base class for all library errors."""


class DimensionError(NovikovForgeError):
    """Operands built over different ranks or mismatched weight vectors."""


class ShapeError(NovikovForgeError):
    """Matrix or chain-complex shapes do not line up."""


class PreconditionError(NovikovForgeError):
    """A documented operation precondition does not hold."""


class UndefinedInputError(NovikovForgeError):
    """The operation is undefined for this input (e.g. the zero element)."""


class NotInvertibleError(NovikovForgeError):
    """Something that must be invertible is not; carries the offending determinant."""

    def __init__(self, message, determinant=None):
        super().__init__(message)
        self.determinant = determinant


class StructureError(NovikovForgeError):
    """Block structure required by a collapse or cascade is violated."""


class RepresentationError(NovikovForgeError):
    """A representation descriptor constraint is violated."""


class InvariantViolationError(NovikovForgeError):
    """A certified invariant (simple-collapse flag, survivor count) failed."""


class ConstructionError(NovikovForgeError):
    """Combinatorial input assembles into an inconsistent complex."""


class SizeCapError(NovikovForgeError):
    """Matrix exceeds the size cap for minor enumeration."""


class InputError(NovikovForgeError):
    """Malformed or inconsistent serialized input."""
