"""Shared exception types."""


class LefkitError(Exception):
    """Base class for all errors raised by this package."""


class InputError(LefkitError):
    """Bad user-supplied input: files, flags, schema violations."""


class FieldError(InputError):
    """Invalid field specification."""


class DimensionMismatch(LefkitError):
    """Vector/matrix shapes do not line up."""


class CharacteristicError(LefkitError):
    """Field characteristic too small for a factorial-sensitive operation."""


class PolyParseError(InputError):
    """Syntax error in a polynomial expression; carries the 0-based position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariableError(PolyParseError):
    pass


class NonHomogeneousError(InputError):
    """A polynomial that must be homogeneous is not."""


class MixedDegreeError(LefkitError):
    """Operation requires all generators to share one degree."""


class ProportionalFormsError(InputError):
    """Two linear forms that must be distinct are proportional."""


class SyzygyHypothesisError(LefkitError):
    """A computation assumed no syzygies in some degree, but they exist."""


class NotASectionError(LefkitError):
    """A derivation triple does not annihilate the arrangement polynomial."""
