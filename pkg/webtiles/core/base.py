"""Base class."""

from abc import ABC, abstractmethod
from typing import BinaryIO, Iterator, List, Optional

from .cursor import QueryCursor
from .exceptions import NodeIndexError, PreconditionError


def is_power_of_two(value: int) -> bool:
    """Returns whether `value` is a positive power of two."""

    return value > 0 and value & (value - 1) == 0


def require_power_of_two(name: str, value: int, allow_zero: bool = False):
    """Raise PreconditionError unless `value` is a power of two (or 0 when allowed)."""

    if not (is_power_of_two(value) or (allow_zero and value == 0)):
        raise PreconditionError(f'`{name}` should be a power of two{" or 0" if allow_zero else ""}, got {value}')


class CompressedGraph(ABC):
    """Abstract class that describes how a compressed graph answers queries and persists itself."""

    n: int

    @abstractmethod
    def new_cursor(self) -> QueryCursor:
        """Returns a cursor whose scratch bound fits every block of this graph."""

    @abstractmethod
    def successors(self, node: int, cursor: Optional[QueryCursor] = None) -> List[int]:
        """Returns the successors of `node` in increasing order."""

    @abstractmethod
    def iter_lists(self) -> Iterator[List[int]]:
        """Iterate over the successor lists of all nodes in order."""

    @abstractmethod
    def save(self, sink: BinaryIO):
        """Serialize the graph to `sink`."""

    @abstractmethod
    def file_size(self) -> int:
        """Returns the number of bytes `save()` writes."""

    def check_node(self, node: int):
        """Raise NodeIndexError unless `node` is in [0, n)."""

        if not 0 <= node < self.n:
            raise NodeIndexError(f'node {node} outside [0, {self.n})')


__all__ = (
    'is_power_of_two',
    'require_power_of_two',
    'CompressedGraph',
)
