"""2D tiled compression with optional stripe bitmaps.

The adjacency matrix is cut into B x B tiles; only non-empty tiles are stored, in row-major order of tiles. Two
offset arrays give random access in both directions:

    * `x_offsets` holds, per stored tile, the encoding tag in the top two bits and the payload offset below, plus a
      sentinel equal to the payload length; `x_first[r]` is the index of the first tile of tile-row `r`.
    * `y_offsets` lists the `x_offsets` indices of the stored tiles column by column; `y_first[c]` is the index of
      the first entry of tile-column `c`.

File layout (``.s2d``, little-endian)::

    "S2D1" | u32 B | u32 K | u64 n | u64 links | u64 T | u64 M | (M + 1) x u64 x_offsets | (T + 1) x u64 x_first
    | M x u64 y_offsets | (T + 1) x u64 y_first | u64 payload length | payload
"""

import logging
import struct
from collections import Counter
from typing import BinaryIO, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import attr
import numpy as np

from .base import CompressedGraph
from .binary import BinaryReader, write_table
from .cursor import QueryCursor
from .exceptions import CapacityError, FormatError, GraphValidationError, PreconditionError, UndefinedRatioError
from .graph import AdjacencyGraph
from .tile import COORDINATE_LIMIT, CompressedTile, TileGeometry, UncompressedTile

logger = logging.getLogger(__name__)

MAGIC = b'S2D1'
HEADER = struct.Struct('<4sIIQQQQ')
LENGTH = struct.Struct('<Q')
TAG_SHIFT = 62
OFFSET_MASK = (1 << TAG_SHIFT) - 1
DEFAULT_TILE = 1024
DEFAULT_STRIPES = 8
BENCHMARK_TILES = (128, 256, 512, 1024, 2048)
BENCHMARK_STRIPES = (0, 8, 16, 32, 64, 128)

_TABLE_EQ = attr.cmp_using(eq=np.array_equal)


@attr.s(auto_attribs=True, eq=True)
class StripeStats:
    # noinspection PyUnresolvedReferences
    """2D size statistics.

    Attributes:
        links (int): Number of edges.
        file_bytes (int): Size of the ``.s2d`` file.
        non_empty_tiles (int): Number of stored tiles M.
        tile_tag_histogram (tuple of int): Stored tiles per encoding tag 0..3.
        stripe_overhead_bytes (int): Bytes spent on stripe bitmaps, ``2 * ceil(K / 8) * M``.
    """

    links: int
    file_bytes: int
    non_empty_tiles: int
    tile_tag_histogram: Tuple[int, int, int, int]
    stripe_overhead_bytes: int

    @property
    def bits_per_link(self) -> float:
        """float: ``8 * file_bytes / links``.

        Raises:
            UndefinedRatioError: If the graph has no links.
        """

        if not self.links:
            raise UndefinedRatioError('bits per link undefined for a graph without links')
        return 8 * self.file_bytes / self.links


def _check_first_table(table: np.ndarray, count: int, name: str):
    if table[0] != 0 or int(table[-1]) != count or np.any(table[1:] < table[:-1]):
        raise FormatError(f's2d: {name} is not a non-decreasing table from 0 to {count}')


@attr.s(auto_attribs=True, eq=True, repr=False)
class StripeGraph(CompressedGraph):
    # noinspection PyUnresolvedReferences
    """2D-compressed graph answering successor and predecessor queries, immutable once built or loaded.

    Attributes:
        tile_size (int): Tile side B.
        stripes (int): Stripe count K; 0 disables stripes.
        n (int): Number of nodes.
        links (int): Number of edges.
        x_offsets (:obj:`numpy.ndarray`): M + 1 tagged offsets in row-major tile order.
        x_first (:obj:`numpy.ndarray`): T + 1 indices into `x_offsets`, one per tile-row.
        y_offsets (:obj:`numpy.ndarray`): M indices into `x_offsets` in column-major tile order.
        y_first (:obj:`numpy.ndarray`): T + 1 indices into `y_offsets`, one per tile-column.
        payload (bytes): Concatenated tile blobs.
    """

    tile_size: int
    stripes: int
    n: int
    links: int
    x_offsets: np.ndarray = attr.ib(eq=_TABLE_EQ)
    x_first: np.ndarray = attr.ib(eq=_TABLE_EQ)
    y_offsets: np.ndarray = attr.ib(eq=_TABLE_EQ)
    y_first: np.ndarray = attr.ib(eq=_TABLE_EQ)
    payload: bytes
    geometry: TileGeometry = attr.ib(init=False, eq=False)
    _decoder: CompressedTile = attr.ib(init=False, eq=False)

    def __attrs_post_init__(self):
        self.geometry = TileGeometry(self.tile_size, self.stripes)
        self._decoder = CompressedTile(self.geometry)

    def __repr__(self):
        return (f'{self.__class__.__name__}(tile_size={self.tile_size}, stripes={self.stripes}, n={self.n}, '
                f'tiles={self.non_empty_tiles}, payload={len(self.payload)} bytes)')

    @property
    def tiles_per_side(self) -> int:
        """int: T, the number of tile-rows and tile-columns."""

        return len(self.x_first) - 1

    @property
    def non_empty_tiles(self) -> int:
        """int: M, the number of stored tiles."""

        return len(self.y_offsets)

    @classmethod
    def compress(cls, graph: AdjacencyGraph, tile_size: int = DEFAULT_TILE,
                 stripes: int = DEFAULT_STRIPES) -> 'StripeGraph':
        """Compress an in-memory graph.

        Raises:
            PreconditionError: If `tile_size` or `stripes` is not a power of two (`stripes` may be 0).
            CapacityError: If the graph needs too many tiles or a tile index does not fit the encoding.
        """

        return cls.compress_lines(graph.lists, graph.n, tile_size, stripes)

    @classmethod
    def compress_lines(cls, lines: Iterable[Sequence[int]], n: int, tile_size: int = DEFAULT_TILE,
                       stripes: int = DEFAULT_STRIPES) -> 'StripeGraph':
        """Compress a stream of `n` sorted successor lists, one tile-row at a time.

        Only the tiles of the current tile-row are alive. When a tile-row is complete its non-empty tiles are
        compressed left to right and their offsets recorded; the column-major index is assembled at the end.

        Raises:
            PreconditionError: If `tile_size` or `stripes` is not a power of two (`stripes` may be 0).
            GraphValidationError: If the stream does not hold exactly `n` lists or a successor is outside [0, n).
            CapacityError: If the graph needs too many tiles or a tile index does not fit the encoding.
        """

        geometry = TileGeometry(tile_size, stripes)
        if tile_size not in BENCHMARK_TILES:
            logger.warning('Tile size %d is outside the usual grid %s', tile_size, BENCHMARK_TILES)
        if stripes > tile_size:
            logger.warning('%d stripes on a %d-tile leave some stripes permanently empty', stripes, tile_size)
        tiles_per_side = -(-n // tile_size)
        if tiles_per_side >= COORDINATE_LIMIT:
            raise CapacityError(f'{tiles_per_side} tiles per side do not fit 3-byte tile coordinates')

        builder = _StripeBuilder(geometry, tiles_per_side)
        log_size, mask = geometry.log_size, geometry.mask
        links = 0
        node = -1
        for node, successors in enumerate(lines):
            if node >= n:
                raise GraphValidationError(f'more than {n} adjacency lists')
            if successors and (successors[0] < 0 or successors[-1] >= n):
                raise GraphValidationError(f'node {node} has a successor outside [0, {n})')
            if node & mask == 0 and node:
                builder.flush_row((node >> log_size) - 1)
            y = node & mask
            for successor in successors:
                builder.tile(successor >> log_size).add_link(successor & mask, y)
            links += len(successors)
        if node + 1 != n:
            raise GraphValidationError(f'expected {n} adjacency lists, got {node + 1}')
        if n:
            builder.flush_row(tiles_per_side - 1)

        graph = builder.build(n, links)
        logger.info('2D compressed %d nodes, %d links into %d tiles, %d bytes (B=%d, K=%d)',
                    n, links, graph.non_empty_tiles, len(graph.payload), tile_size, stripes)
        return graph

    def new_cursor(self) -> QueryCursor:
        return QueryCursor(scratch_size=self.geometry.scratch_size)

    def _blob(self, index: int) -> Tuple[memoryview, int]:
        entry = int(self.x_offsets[index])
        end = int(self.x_offsets[index + 1]) & OFFSET_MASK
        return memoryview(self.payload)[entry & OFFSET_MASK:end], entry >> TAG_SHIFT

    def successors(self, node: int, cursor: Optional[QueryCursor] = None) -> List[int]:
        """Returns the successors of `node` in increasing order.

        Every stored tile of the node's tile-row is visited left to right; tiles whose row stripe is empty are
        skipped without decoding.

        Raises:
            NodeIndexError: If `node` is outside [0, n).
            CorruptStreamError: If a tile cannot be decoded.
        """

        self.check_node(node)
        if cursor is None:
            cursor = self.new_cursor()
        out = cursor.begin()
        log_size = self.geometry.log_size
        row = node & self.geometry.mask
        band = node >> log_size
        for index in range(int(self.x_first[band]), int(self.x_first[band + 1])):
            blob, tag = self._blob(index)
            base = self._decoder.coordinates(blob)[0] << log_size
            out.extend(base + column for column in self._decoder.row_entries(blob, tag, row, cursor))
        return list(out)

    def predecessors(self, node: int, cursor: Optional[QueryCursor] = None) -> List[int]:
        """Returns the predecessors of `node` in increasing order.

        Every stored tile of the node's tile-column is visited top to bottom; tiles whose column stripe is empty
        are skipped without decoding.

        Raises:
            NodeIndexError: If `node` is outside [0, n).
            CorruptStreamError: If a tile cannot be decoded.
        """

        self.check_node(node)
        if cursor is None:
            cursor = self.new_cursor()
        out = cursor.begin()
        log_size = self.geometry.log_size
        column = node & self.geometry.mask
        band = node >> log_size
        for position in range(int(self.y_first[band]), int(self.y_first[band + 1])):
            blob, tag = self._blob(int(self.y_offsets[position]))
            base = self._decoder.coordinates(blob)[1] << log_size
            out.extend(base + row for row in self._decoder.column_entries(blob, tag, column, cursor))
        return list(out)

    def iter_lists(self) -> Iterator[List[int]]:
        """Iterate over all successor lists, decoding every stored tile exactly once."""

        cursor = self.new_cursor()
        log_size = self.geometry.log_size
        for band in range(self.tiles_per_side):
            rows: List[List[int]] = [[] for _ in range(min(self.tile_size, self.n - (band << log_size)))]
            for index in range(int(self.x_first[band]), int(self.x_first[band + 1])):
                blob, tag = self._blob(index)
                base = self._decoder.coordinates(blob)[0] << log_size
                for row, column in self._decoder.edges(blob, tag, cursor):
                    rows[row].append(base + column)
            for successors in rows:
                successors.sort()
                yield successors

    def tag_histogram(self) -> Tuple[int, int, int, int]:
        """Returns the number of stored tiles per encoding tag."""

        counts = Counter(int(entry) >> TAG_SHIFT for entry in self.x_offsets[:-1])
        return counts[0], counts[1], counts[2], counts[3]

    def stats(self) -> StripeStats:
        """Size statistics; no tile is decoded."""

        return StripeStats(
            links=self.links,
            file_bytes=self.file_size(),
            non_empty_tiles=self.non_empty_tiles,
            tile_tag_histogram=self.tag_histogram(),
            stripe_overhead_bytes=2 * self.geometry.stripe_bytes * self.non_empty_tiles,
        )

    def file_size(self) -> int:
        tables = len(self.x_offsets) + len(self.x_first) + len(self.y_offsets) + len(self.y_first)
        return HEADER.size + 8 * tables + LENGTH.size + len(self.payload)

    def save(self, sink: BinaryIO):
        """Write the ``.s2d`` representation to `sink`."""

        sink.write(HEADER.pack(MAGIC, self.tile_size, self.stripes, self.n, self.links, self.tiles_per_side,
                               self.non_empty_tiles))
        for table in (self.x_offsets, self.x_first, self.y_offsets, self.y_first):
            write_table(sink, table)
        sink.write(LENGTH.pack(len(self.payload)))
        sink.write(self.payload)

    @classmethod
    def load(cls, source: BinaryIO) -> 'StripeGraph':
        """Read an ``.s2d`` file, validating its header and every table invariant.

        Raises:
            FormatError: On a bad magic, bad parameters, truncation, trailing bytes or broken table invariants.
        """

        reader = BinaryReader(source.read(), 's2d')
        magic, tile_size, stripes, n, links, tiles_per_side, tiles = reader.unpack(HEADER.format, 'header')
        if magic != MAGIC:
            raise FormatError(f's2d: bad magic {magic!r}')
        try:
            TileGeometry(tile_size, stripes)
        except PreconditionError as ex:
            raise FormatError(f's2d: {ex}') from ex
        if tiles_per_side != -(-n // tile_size) or tiles_per_side >= COORDINATE_LIMIT:
            raise FormatError(f's2d: {tiles_per_side} tiles per side do not match {n} nodes with B={tile_size}')
        x_offsets = reader.table(tiles + 1, 'x_offsets')
        x_first = reader.table(tiles_per_side + 1, 'x_first')
        y_offsets = reader.table(tiles, 'y_offsets')
        y_first = reader.table(tiles_per_side + 1, 'y_first')
        (payload_length,) = reader.unpack(LENGTH.format, 'payload length')
        payload = reader.raw(payload_length, 'payload')
        reader.expect_end()

        positions = x_offsets & np.uint64(OFFSET_MASK)
        if int(x_offsets[-1]) != payload_length:
            raise FormatError('s2d: x_offsets sentinel differs from the payload length')
        if tiles and (positions[0] != 0 or np.any(positions[1:] <= positions[:-1])):
            raise FormatError('s2d: x_offsets are not strictly increasing from 0')
        _check_first_table(x_first, tiles, 'x_first')
        _check_first_table(y_first, tiles, 'y_first')
        if np.any(y_offsets >= np.uint64(max(tiles, 1))) or len(np.unique(y_offsets)) != tiles:
            raise FormatError('s2d: y_offsets is not a permutation of the stored tiles')
        graph = cls(tile_size, stripes, n, links, x_offsets, x_first, y_offsets, y_first, payload)
        graph._check_trailers()
        return graph

    def _check_trailers(self):
        trailer = self.geometry.trailer_size
        coordinates = []
        for index in range(self.non_empty_tiles):
            blob, _ = self._blob(index)
            if len(blob) <= trailer:
                raise FormatError(f's2d: tile {index} is not longer than its trailer')
            coordinates.append(self._decoder.coordinates(blob))
        for band in range(self.tiles_per_side):
            row = [coordinates[index] for index in range(int(self.x_first[band]), int(self.x_first[band + 1]))]
            if any(y_tile != band for _, y_tile in row) or any(a[0] >= b[0] for a, b in zip(row, row[1:])):
                raise FormatError(f's2d: tiles of tile-row {band} are misplaced')
            column = [coordinates[int(self.y_offsets[position])]
                      for position in range(int(self.y_first[band]), int(self.y_first[band + 1]))]
            if any(x_tile != band for x_tile, _ in column) or any(a[1] >= b[1] for a, b in zip(column, column[1:])):
                raise FormatError(f's2d: tiles of tile-column {band} are misplaced')


class _StripeBuilder:
    """Accumulates the payload and offset tables during `StripeGraph.compress_lines()`."""

    def __init__(self, geometry: TileGeometry, tiles_per_side: int):
        self.geometry = geometry
        self.tiles_per_side = tiles_per_side
        self.live: Dict[int, UncompressedTile] = {}
        self.payload = bytearray()
        self.x_offsets: List[int] = []
        self.x_first: List[int] = []
        self.columns: List[List[int]] = [[] for _ in range(tiles_per_side)]

    def tile(self, x_tile: int) -> UncompressedTile:
        tile = self.live.get(x_tile)
        if tile is None:
            tile = self.live[x_tile] = UncompressedTile(self.geometry)
        return tile

    def flush_row(self, y_tile: int):
        """Compress the live tiles of tile-row `y_tile` and register them; tile-rows before it without
        any tile get empty ranges."""

        while len(self.x_first) <= y_tile:
            self.x_first.append(len(self.x_offsets))
        for x_tile in sorted(self.live):
            index = len(self.x_offsets)
            start = len(self.payload)
            try:
                tag, _ = self.live[x_tile].compress(x_tile, y_tile, self.payload)
            except CapacityError as ex:
                first = y_tile * self.geometry.tile_size
                raise CapacityError(f'tile ({x_tile}, {y_tile}): {ex}', first, first + self.geometry.mask) from ex
            self.x_offsets.append((tag << TAG_SHIFT) | start)
            self.columns[x_tile].append(index)
        logger.debug('Tile-row %d: %d tiles, payload %d bytes', y_tile, len(self.live), len(self.payload))
        self.live.clear()

    def build(self, n: int, links: int) -> StripeGraph:
        tiles = len(self.x_offsets)
        while len(self.x_first) <= self.tiles_per_side:
            self.x_first.append(tiles)
        y_offsets: List[int] = []
        y_first: List[int] = []
        for column in self.columns:
            y_first.append(len(y_offsets))
            y_offsets.extend(column)
        y_first.append(len(y_offsets))
        return StripeGraph(
            self.geometry.tile_size,
            self.geometry.stripes,
            n,
            links,
            np.array(self.x_offsets + [len(self.payload)], dtype=np.uint64),
            np.array(self.x_first, dtype=np.uint64),
            np.array(y_offsets, dtype=np.uint64),
            np.array(y_first, dtype=np.uint64),
            bytes(self.payload),
        )


__all__ = (
    'MAGIC',
    'TAG_SHIFT',
    'OFFSET_MASK',
    'DEFAULT_TILE',
    'DEFAULT_STRIPES',
    'BENCHMARK_TILES',
    'BENCHMARK_STRIPES',
    'StripeStats',
    'StripeGraph',
)
