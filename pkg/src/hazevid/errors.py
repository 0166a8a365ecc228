"""Exception hierarchy.

``InputError`` and its subclasses describe bad data coming from outside
(files, headers, sequences) and map to CLI exit code 1.  ``ValueError``
subclasses signal caller misuse of the in-memory API.
"""


class HazevidError(Exception):
    """Base class for all package errors."""


class InputError(HazevidError):
    """Problem with an input sequence or file."""


class MissingInputError(InputError):
    pass


class MalformedInputError(InputError):
    pass


class UnsupportedFormatError(InputError):
    """Valid container, but a depth or colorspace we do not handle."""


class InconsistentDimensionsError(InputError):
    pass


class OutputError(HazevidError):
    """Destination could not be written."""


class ShapeMismatchError(ValueError):
    """Two rasters that must agree in size do not."""


class DomainError(ValueError):
    pass


class UndefinedTestError(ValueError):
    """A statistical test has no usable bins."""
