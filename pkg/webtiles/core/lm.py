"""List merging (LM) compressed graphs.

Consecutive adjacency lists are grouped into chunks of `h` nodes. The union of a chunk's lists (its residues) is
delta coded, followed by one `h`-bit membership bitmap per residue; bit `k` of a residue's bitmap is set iff the
`k`-th list of the chunk contains it. Residues and bitmaps are deflated together, chunk by chunk, and an offset
table gives random access to every chunk.

File layout (``.lmg``, little-endian)::

    "LMG1" | u32 h | u64 n | u64 chunks | u64 max plain chunk bytes | (chunks + 1) x u64 offsets
    | u64 payload length | payload
"""

import logging
import struct
from typing import BinaryIO, Iterable, Iterator, List, Optional, Sequence, Tuple

import attr
import numpy as np

from .base import CompressedGraph, require_power_of_two
from .binary import BinaryReader, write_table
from .codec import delta_decode, delta_encode, deflate_block, inflate_block
from .cursor import QueryCursor
from .exceptions import (
    CapacityError,
    CorruptStreamError,
    FormatError,
    GraphValidationError,
    RangeError,
    UndefinedRatioError,
    UnsupportedModeError,
)
from .graph import AdjacencyGraph

logger = logging.getLogger(__name__)

MAGIC = b'LMG1'
HEADER = struct.Struct('<4sIQQQ')
LENGTH = struct.Struct('<Q')
DEFAULT_H = 16
BENCHMARK_HS = (8, 16, 32, 64, 128)


def _flag_stride(h: int) -> int:
    return (h + 7) >> 3


def compress_chunk(chunk: Sequence[Sequence[int]], h: int, first_node: int = 0) -> bytes:
    """Returns the plain (not yet deflated) bytes of one chunk.

    Args:
        chunk: Up to `h` sorted successor lists.
        h (int): Chunk height; every residue gets ``ceil(h / 8)`` bitmap bytes.
        first_node (int): Id of the chunk's first node, used in error messages.

    Raises:
        CapacityError: If a residue gap does not fit the variable-byte encoding.
    """

    residues = sorted(set().union(*chunk)) if chunk else []
    position = {residue: index for index, residue in enumerate(residues)}
    stride = _flag_stride(h)
    flags = bytearray(len(residues) * stride)
    for row, successors in enumerate(chunk):
        column, mask = row >> 3, 1 << (row & 7)
        for successor in successors:
            flags[position[successor] * stride + column] |= mask
    try:
        head = delta_encode(residues)
    except RangeError as ex:
        last_node = first_node + len(chunk) - 1
        raise CapacityError(f'residue gap too large in nodes {first_node}..{last_node}', first_node, last_node) from ex
    return head + flags


def _unpack_chunk(plain: bytes, h: int) -> Tuple[List[int], int]:
    residues, pos = delta_decode(plain)
    if len(plain) - pos != len(residues) * _flag_stride(h):
        raise CorruptStreamError(f'chunk holds {len(plain) - pos} flag bytes for {len(residues)} residues')
    return residues, pos


@attr.s(auto_attribs=True, eq=True, repr=False)
class LmStats:
    # noinspection PyUnresolvedReferences
    """LM size statistics.

    Attributes:
        links (int): Number of edges.
        chunks (int): Number of chunks.
        payload_bytes (int): Size of all deflated chunks.
        file_bytes (int): Size of the ``.lmg`` file.
        max_plain_chunk_bytes (int): Largest inflated chunk.
        max_residues (int): Largest number of residues in one chunk.
    """

    links: int
    chunks: int
    payload_bytes: int
    file_bytes: int
    max_plain_chunk_bytes: int
    max_residues: int

    def __repr__(self):
        return (f'{self.__class__.__name__}(links={self.links}, chunks={self.chunks}, '
                f'file_bytes={self.file_bytes}, max_residues={self.max_residues})')

    @property
    def bits_per_link(self) -> float:
        """float: ``8 * file_bytes / links``.

        Raises:
            UndefinedRatioError: If the graph has no links.
        """

        if not self.links:
            raise UndefinedRatioError('bits per link undefined for a graph without links')
        return 8 * self.file_bytes / self.links


@attr.s(auto_attribs=True, eq=True, repr=False)
class LmGraph(CompressedGraph):
    # noinspection PyUnresolvedReferences
    """LM-compressed graph, immutable once built or loaded.

    Attributes:
        h (int): Chunk height, a power of two.
        n (int): Number of nodes.
        offsets (:obj:`numpy.ndarray`): ``chunks + 1`` byte offsets into `payload`, the last one its length.
        payload (bytes): Concatenated raw DEFLATE streams, one per chunk.
        max_plain_chunk_bytes (int): Largest inflated chunk; bounds the cursor scratch.
        links (int, optional): Edge count when known from compression, `None` after loading.
    """

    h: int
    n: int
    offsets: np.ndarray = attr.ib(eq=attr.cmp_using(eq=np.array_equal))
    payload: bytes
    max_plain_chunk_bytes: int = 0
    links: Optional[int] = attr.ib(default=None, eq=False)

    def __repr__(self):
        return f'{self.__class__.__name__}(h={self.h}, n={self.n}, payload={len(self.payload)} bytes)'

    @property
    def chunks(self) -> int:
        """int: Number of chunks, ``ceil(n / h)``."""

        return len(self.offsets) - 1

    @classmethod
    def compress(cls, graph: AdjacencyGraph, h: int = DEFAULT_H) -> 'LmGraph':
        """Compress an in-memory graph.

        Raises:
            PreconditionError: If `h` is not a power of two.
            CapacityError: If a chunk's residue gaps do not fit the variable-byte encoding.
        """

        return cls.compress_lines(graph.lists, graph.n, h)

    @classmethod
    def compress_lines(cls, lines: Iterable[Sequence[int]], n: int, h: int = DEFAULT_H) -> 'LmGraph':
        """Compress a stream of `n` sorted successor lists, one chunk at a time.

        Raises:
            PreconditionError: If `h` is not a power of two.
            GraphValidationError: If the stream does not hold exactly `n` lists or a successor is outside [0, n).
            CapacityError: If a chunk's residue gaps do not fit the variable-byte encoding.
        """

        require_power_of_two('h', h)
        if h not in BENCHMARK_HS:
            logger.warning('Chunk height %d is outside the usual grid %s', h, BENCHMARK_HS)
        offsets = [0]
        payload = bytearray()
        max_plain = 0
        links = 0
        chunk: List[Sequence[int]] = []
        node = -1

        def flush(first_node: int):
            nonlocal max_plain
            plain = compress_chunk(chunk, h, first_node)
            max_plain = max(max_plain, len(plain))
            payload.extend(deflate_block(plain))
            offsets.append(len(payload))
            chunk.clear()

        for node, successors in enumerate(lines):
            if node >= n:
                raise GraphValidationError(f'more than {n} adjacency lists')
            if successors and (successors[0] < 0 or successors[-1] >= n):
                raise GraphValidationError(f'node {node} has a successor outside [0, {n})')
            chunk.append(successors)
            links += len(successors)
            if len(chunk) == h:
                flush(node + 1 - h)
        if chunk:
            flush(node + 1 - len(chunk))
        if node + 1 != n:
            raise GraphValidationError(f'expected {n} adjacency lists, got {node + 1}')

        logger.info('LM compressed %d nodes, %d links into %d bytes (h=%d)', n, links, len(payload), h)
        return cls(h, n, np.array(offsets, dtype=np.uint64), bytes(payload), max_plain, links)

    def new_cursor(self) -> QueryCursor:
        return QueryCursor(scratch_size=self.max_plain_chunk_bytes)

    def _inflate_chunk(self, chunk: int, cursor: QueryCursor) -> bytes:
        start, end = int(self.offsets[chunk]), int(self.offsets[chunk + 1])
        cursor.bodies_decoded += 1
        cursor.inflations += 1
        return inflate_block(memoryview(self.payload)[start:end], cursor.scratch_size)

    def successors(self, node: int, cursor: Optional[QueryCursor] = None) -> List[int]:
        """Returns the successors of `node` in increasing order.

        The node's chunk is inflated and every residue whose flag bit for the node's row is set is emitted.

        Raises:
            NodeIndexError: If `node` is outside [0, n).
            CorruptStreamError: If the chunk cannot be decoded.
        """

        self.check_node(node)
        if cursor is None:
            cursor = self.new_cursor()
        out = cursor.begin()
        plain = self._inflate_chunk(node // self.h, cursor)
        residues, pos = _unpack_chunk(plain, self.h)
        row = node % self.h
        stride = _flag_stride(self.h)
        at, mask = pos + (row >> 3), 1 << (row & 7)
        for residue in residues:
            if plain[at] & mask:
                out.append(residue)
            at += stride
        return list(out)

    def predecessors(self, node: int, cursor: Optional[QueryCursor] = None) -> List[int]:
        """LM answers successor queries only.

        Raises:
            UnsupportedModeError: Always; compress the transposed graph and query its successors instead.
        """

        raise UnsupportedModeError('LM graphs answer successor queries only; '
                                   'compress the transposed graph and query its successors instead')

    def iter_lists(self) -> Iterator[List[int]]:
        """Iterate over all successor lists, inflating each chunk once."""

        cursor = self.new_cursor()
        stride = _flag_stride(self.h)
        for chunk in range(self.chunks):
            plain = self._inflate_chunk(chunk, cursor)
            residues, pos = _unpack_chunk(plain, self.h)
            for row in range(min(self.h, self.n - chunk * self.h)):
                at, mask = pos + (row >> 3), 1 << (row & 7)
                yield [residue for index, residue in enumerate(residues) if plain[at + index * stride] & mask]

    def stats(self) -> LmStats:
        """Compute size statistics with one pass over all chunks."""

        cursor = self.new_cursor()
        links = 0
        max_residues = 0
        for chunk in range(self.chunks):
            plain = self._inflate_chunk(chunk, cursor)
            residues, pos = _unpack_chunk(plain, self.h)
            max_residues = max(max_residues, len(residues))
            links += sum(bin(byte).count('1') for byte in plain[pos:])
        return LmStats(links, self.chunks, len(self.payload), self.file_size(), self.max_plain_chunk_bytes,
                       max_residues)

    def file_size(self) -> int:
        return HEADER.size + 8 * len(self.offsets) + LENGTH.size + len(self.payload)

    def save(self, sink: BinaryIO):
        """Write the ``.lmg`` representation to `sink`."""

        sink.write(HEADER.pack(MAGIC, self.h, self.n, self.chunks, self.max_plain_chunk_bytes))
        write_table(sink, self.offsets)
        sink.write(LENGTH.pack(len(self.payload)))
        sink.write(self.payload)

    @classmethod
    def load(cls, source: BinaryIO) -> 'LmGraph':
        """Read an ``.lmg`` file, validating its header and offset table.

        Raises:
            FormatError: On a bad magic, truncation, trailing bytes or broken offset invariants.
        """

        reader = BinaryReader(source.read(), 'lmg')
        magic, h, n, chunks, max_plain = reader.unpack(HEADER.format, 'header')
        if magic != MAGIC:
            raise FormatError(f'lmg: bad magic {magic!r}')
        if h <= 0 or h & (h - 1):
            raise FormatError(f'lmg: chunk height {h} is not a power of two')
        if chunks != -(-n // h):
            raise FormatError(f'lmg: {chunks} chunks cannot hold {n} nodes with h={h}')
        offsets = reader.table(chunks + 1, 'offsets')
        (payload_length,) = reader.unpack(LENGTH.format, 'payload length')
        payload = reader.raw(payload_length, 'payload')
        reader.expect_end()
        if offsets[0] != 0:
            raise FormatError('lmg: first offset is not 0')
        if np.any(offsets[1:] < offsets[:-1]):
            raise FormatError('lmg: offsets decrease')
        if int(offsets[-1]) != payload_length:
            raise FormatError(f'lmg: last offset {int(offsets[-1])} differs from payload length {payload_length}')
        return cls(h, n, offsets, payload, max_plain)


__all__ = (
    'MAGIC',
    'DEFAULT_H',
    'BENCHMARK_HS',
    'compress_chunk',
    'LmStats',
    'LmGraph',
)
