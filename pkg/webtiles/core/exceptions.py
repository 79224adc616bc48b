"""Exceptions."""


class WebTilesError(Exception):
    """Base exception class."""


class RangeError(WebTilesError, ValueError):
    """A value does not fit the variable-byte encoding."""


class CorruptStreamError(WebTilesError):
    """An encoded or deflated stream could not be decoded."""


class PreconditionError(WebTilesError, ValueError):
    """Input violates an ordering or shape requirement of the encoder."""


class CapacityError(WebTilesError):
    """Data does not fit the capacity of the compressed format.

    Attributes:
        first_node (int): The first node of the offending range, if known.
        last_node (int): The last node of the offending range, if known.
    """

    def __init__(self, message: str, first_node: int = None, last_node: int = None):
        super().__init__(message)
        self.first_node = first_node
        self.last_node = last_node


class ParseError(WebTilesError):
    """Text graph input contains an illegal byte.

    Attributes:
        line (int): 1-based number of the offending line.
    """

    def __init__(self, message: str, line: int):
        super().__init__(f'line {line}: {message}')
        self.line = line


class GraphValidationError(WebTilesError):
    """A successor id lies outside the node range."""


class ParameterError(WebTilesError, ValueError):
    """Invalid generator or benchmark parameter."""


class NodeIndexError(WebTilesError, IndexError):
    """Node id outside [0, n)."""


class FormatError(WebTilesError):
    """Malformed file: bad magic, truncated data or broken table invariant."""


class UnsupportedModeError(WebTilesError):
    """The representation cannot answer the requested kind of query."""


class UndefinedRatioError(WebTilesError, ZeroDivisionError):
    """Bits per link requested for a graph without links."""


__all__ = (
    'WebTilesError',
    'RangeError',
    'CorruptStreamError',
    'PreconditionError',
    'CapacityError',
    'ParseError',
    'GraphValidationError',
    'ParameterError',
    'NodeIndexError',
    'FormatError',
    'UnsupportedModeError',
    'UndefinedRatioError',
)
