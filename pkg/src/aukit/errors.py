"""Exception types raised across the package.

Everything derives from :class:`AuError` (itself a ``ValueError``) so callers
can catch validation problems with one clause. File-level corruption is kept
separate via :class:`CorruptFile`.
"""


class AuError(ValueError):
    pass


class IndexOutOfRange(AuError, IndexError):
    pass


class BadLength(AuError):
    pass


class ValueOutOfRange(AuError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"AU value {value!r} at index {index} is outside [0, 1]")


class EmptySequence(AuError):
    pass


class UnknownEmotion(AuError):
    pass


class ShapeMismatch(AuError):
    pass


class DimensionMismatch(ShapeMismatch):
    pass


class LengthMismatch(AuError):
    pass


class EmptyInput(AuError):
    pass


class TooSmall(AuError):
    pass


class BadPhase(AuError):
    pass


class BadDimensions(AuError):
    pass


class ParseError(AuError):
    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} (at offset {offset})")


class BadIndex(ParseError):
    def __init__(self, index, offset):
        self.index = index
        super().__init__(f"AU index {index} outside 0-23", offset)


class BadIntensity(ParseError):
    def __init__(self, value, offset):
        self.value = value
        super().__init__(f"intensity {value!r} outside [0, 1]", offset)


class NoEmotionHeader(AuError):
    pass


class NoFrames(AuError):
    pass


class SchemaError(AuError):
    pass


class CorruptFile(AuError):
    pass
