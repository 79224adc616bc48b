"""Uncompressed adjacency graphs and the text graph format.

A text graph has one line per node; line `i` lists the successors of node `i` as base-10 integers separated by
spaces. The canonical form ends every successor with a single space and every line with ``\\n``, so an empty line
is a node without successors. Lines without the trailing space are accepted as well.
"""

import logging
from typing import BinaryIO, Iterable, Iterator, List, Sequence

import attr

from .exceptions import GraphValidationError, NodeIndexError, ParseError

logger = logging.getLogger(__name__)

DEFAULT_BUFFER_SIZE = 32 * 1024 * 1024

_LEGAL_BYTES = b'0123456789 '


def normalize_list(successors: Iterable[int]) -> List[int]:
    """Returns `successors` sorted and without duplicates."""

    return sorted(set(successors))


@attr.s(auto_attribs=True, frozen=True)
class AdjacencyGraph:
    # noinspection PyUnresolvedReferences
    """In-memory uncompressed graph, immutable after construction.

    Attributes:
        lists (tuple of list of int): Strictly increasing successor ids of every node.
    """

    lists: Sequence[List[int]] = attr.ib(converter=tuple, repr=False)

    @classmethod
    def from_lists(cls, lists: Iterable[Iterable[int]]) -> 'AdjacencyGraph':
        """Build a graph from raw successor lists, sorting and deduplicating each one.

        Raises:
            GraphValidationError: If a successor id is outside [0, n).
        """

        graph = cls([normalize_list(successors) for successors in lists])
        graph.validate()
        return graph

    def __len__(self):
        return self.n

    def __iter__(self) -> Iterator[List[int]]:
        return iter(self.lists)

    @property
    def n(self) -> int:
        """int: Number of nodes."""

        return len(self.lists)

    @property
    def links(self) -> int:
        """int: Number of edges."""

        return sum(len(successors) for successors in self.lists)

    def validate(self):
        """Check that every successor id is in [0, n).

        Raises:
            GraphValidationError: If a successor id is outside [0, n).
        """

        n = self.n
        for node, successors in enumerate(self.lists):
            if successors and (successors[0] < 0 or successors[-1] >= n):
                raise GraphValidationError(f'node {node} has a successor outside [0, {n})')

    def successors(self, node: int) -> List[int]:
        """Returns the successors of `node`.

        Raises:
            NodeIndexError: If `node` is outside [0, n).
        """

        if not 0 <= node < self.n:
            raise NodeIndexError(f'node {node} outside [0, {self.n})')
        return self.lists[node]

    def predecessors(self, node: int) -> List[int]:
        """Returns the predecessors of `node` by a full scan. Meant for tests on small graphs."""

        self.successors(node)
        return [source for source, successors in enumerate(self.lists) if node in successors]


def oracle_successors(graph: AdjacencyGraph, node: int) -> List[int]:
    """Ground-truth successor list of `node`.

    Raises:
        NodeIndexError: If `node` is outside [0, n).
    """

    return graph.successors(node)


def _decode_line(line: bytes, line_number: int) -> List[int]:
    rest = line.translate(None, _LEGAL_BYTES)
    if rest:
        column = next(i for i, byte in enumerate(line) if byte not in _LEGAL_BYTES)
        raise ParseError(f'illegal byte {line[column:column + 1]!r} at column {column + 1}', line_number)
    return normalize_list(int(token) for token in line.split())


def iter_text_lists(source: BinaryIO, buffer_size: int = DEFAULT_BUFFER_SIZE) -> Iterator[List[int]]:
    """Stream the normalized successor lists of a text graph.

    The input is read `buffer_size` bytes at a time; all complete lines of the buffer are decoded and the tail
    after the last newline is carried over to the next read. A final line without newline still counts as a node.

    Raises:
        ParseError: On any byte other than digits, spaces and newlines.
    """

    line_number = 0
    pending = b''
    while True:
        block = source.read(buffer_size)
        if not block:
            break
        block = pending + block
        cut = block.rfind(b'\n')
        if cut < 0:
            pending = block
            continue
        pending = block[cut + 1:]
        for line in block[:cut].split(b'\n'):
            line_number += 1
            yield _decode_line(line, line_number)
    if pending:
        yield _decode_line(pending, line_number + 1)


def count_text_lines(source: BinaryIO, buffer_size: int = DEFAULT_BUFFER_SIZE) -> int:
    """Returns the number of nodes of a text graph without decoding it."""

    count = 0
    last = b'\n'
    while True:
        block = source.read(buffer_size)
        if not block:
            break
        count += block.count(b'\n')
        last = block[-1:]
    return count if last == b'\n' else count + 1


def parse_text_graph(source: BinaryIO, buffer_size: int = DEFAULT_BUFFER_SIZE) -> AdjacencyGraph:
    """Read a whole text graph.

    Raises:
        ParseError: On any byte other than digits, spaces and newlines.
        GraphValidationError: If a successor id is not below the number of lines.
    """

    graph = AdjacencyGraph(list(iter_text_lists(source, buffer_size)))
    graph.validate()
    logger.debug('Parsed text graph with %d nodes', graph.n)
    return graph


def write_text_lists(lists: Iterable[Sequence[int]], sink: BinaryIO) -> int:
    """Write successor lists in canonical text form.

    Returns:
        The number of lines written.
    """

    count = 0
    for successors in lists:
        sink.write(b''.join(b'%d ' % successor for successor in successors) + b'\n')
        count += 1
    return count


def write_text_graph(graph: AdjacencyGraph, sink: BinaryIO):
    """Write `graph` in canonical text form."""

    write_text_lists(graph.lists, sink)


def transpose(graph: AdjacencyGraph) -> AdjacencyGraph:
    """Returns the graph with every edge reversed.

    Sources are visited in increasing order, so the transposed lists come out sorted.
    """

    lists: List[List[int]] = [[] for _ in range(graph.n)]
    for source, successors in enumerate(graph.lists):
        for target in successors:
            lists[target].append(source)
    return AdjacencyGraph(lists)


__all__ = (
    'DEFAULT_BUFFER_SIZE',
    'normalize_list',
    'AdjacencyGraph',
    'oracle_successors',
    'iter_text_lists',
    'count_text_lines',
    'parse_text_graph',
    'write_text_lists',
    'write_text_graph',
    'transpose',
)
