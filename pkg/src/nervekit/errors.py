"""Exception types raised across nervekit."""


class NerveKitError(Exception):
    """Base class for every error raised by this package."""


class EmptySpace(NerveKitError, ValueError):
    pass


class DuplicateWorld(NerveKitError, ValueError):
    def __init__(self, label):
        super().__init__(f"duplicate world label {label!r}")
        self.label = label


class UnknownWorld(NerveKitError, KeyError):
    def __init__(self, label):
        super().__init__(label)
        self.label = label

    def __str__(self):
        return f"unknown world {self.label!r}"


class SpaceMismatch(NerveKitError, ValueError):
    pass


class InvalidMeasure(NerveKitError, ValueError):
    pass


class ParseError(NerveKitError, ValueError):
    """Formula text could not be parsed.

    ``position`` is the 1-based character offset of the offending token;
    ``expected`` describes what the parser was looking for there.
    """

    def __init__(self, position, expected, text=None):
        self.position = position
        self.expected = expected
        self.text = text
        super().__init__(f"position {position}: expected {expected}")


class UnknownAtom(NerveKitError, LookupError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown atom {self.name!r}"


class IndexOutOfRange(NerveKitError, IndexError):
    pass


class GuardExceeded(NerveKitError, RuntimeError):
    def __init__(self, what, value, limit):
        super().__init__(f"{what}: {value} exceeds limit {limit}")
        self.value = value
        self.limit = limit


class NoMeasure(NerveKitError, ValueError):
    pass


class SchemaError(NerveKitError, ValueError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
