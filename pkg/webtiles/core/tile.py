"""B x B tiles of the adjacency matrix.

An edge at column `x` and row `y` of a tile has the horizontal (row-major) index ``y * B + x`` and the vertical
(column-major) index ``x * B + y``. A tile is stored with whichever of four encodings is shortest:

    ===  ==========  =======
    tag  numbering   deflate
    ===  ==========  =======
    0    horizontal  no
    1    horizontal  yes
    2    vertical    no
    3    vertical    yes
    ===  ==========  =======

The tag travels in the top two bits of the tile's offset entry. The stored blob is::

    body | x stripes (ceil(K / 8) bytes) | y stripes (ceil(K / 8) bytes) | xTile (3 bytes LE) | yTile (3 bytes LE)

Stripe bit `s` is set iff some edge has its column (x stripes) or row (y stripes) in ``[s * B / K, (s + 1) * B / K)``.
With ``K = 0`` there are no stripe bytes and every tile body is decoded.
"""

from typing import Iterator, List, Tuple

from .base import require_power_of_two
from .codec import BitSet, ByteLike, append_varbyte, bit_is_set, deflate_block, delta_encode, inflate_block, iter_delta
from .cursor import QueryCursor
from .exceptions import CapacityError, CorruptStreamError, PreconditionError, RangeError

TAG_HORIZONTAL = 0
TAG_HORIZONTAL_DEFLATE = 1
TAG_VERTICAL = 2
TAG_VERTICAL_DEFLATE = 3

ZIPPED = 1
TRANSPOSED = 2

COORDINATE_LIMIT = 1 << 24


def choose_encoding(horizontal: int, horizontal_zipped: int, vertical: int, vertical_zipped: int) -> int:
    """Pick the shortest of the four candidate bodies by their lengths.

    Ties go to the plain body over the zipped one of the same numbering, then to the horizontal numbering.
    """

    if horizontal <= horizontal_zipped:
        if vertical <= vertical_zipped:
            return TAG_HORIZONTAL if horizontal <= vertical else TAG_VERTICAL
        return TAG_HORIZONTAL if horizontal <= vertical_zipped else TAG_VERTICAL_DEFLATE
    if vertical <= vertical_zipped:
        return TAG_HORIZONTAL_DEFLATE if horizontal_zipped <= vertical else TAG_VERTICAL
    return TAG_HORIZONTAL_DEFLATE if horizontal_zipped <= vertical_zipped else TAG_VERTICAL_DEFLATE


class TileGeometry:
    """Tile side and stripe count shared by the builder and the decoder.

    Args:
        tile_size (int): Tile side B, a power of two.
        stripes (int): Stripe count K, a power of two or 0 for no stripes.

    Raises:
        PreconditionError: If a parameter is not a power of two.
    """

    def __init__(self, tile_size: int, stripes: int):
        require_power_of_two('tile_size', tile_size)
        require_power_of_two('stripes', stripes, allow_zero=True)
        self.tile_size = tile_size
        self.stripes = stripes
        self.log_size = tile_size.bit_length() - 1
        self.mask = tile_size - 1
        self.stripe_bytes = (stripes + 7) >> 3
        self.trailer_size = 2 * self.stripe_bytes + 6
        self.scratch_size = 3 * tile_size * tile_size + 1

    def __repr__(self):
        return f'{self.__class__.__name__}(tile_size={self.tile_size}, stripes={self.stripes})'

    def stripe_of(self, coordinate: int) -> int:
        """Returns the stripe index of an in-tile row or column."""

        return (coordinate * self.stripes) >> self.log_size


class UncompressedTile:
    """Tile under construction.

    Links must arrive in row-major order, which holds when the adjacency lists are read row by row. The
    horizontal delta stream is built on the fly; vertical indices are sorted at compression time.

    Args:
        geometry (:obj:`TileGeometry`): Tile side and stripe count.
    """

    def __init__(self, geometry: TileGeometry):
        self.geometry = geometry
        self.horizontal = bytearray()
        self.vertical: List[int] = []
        self.x_strip = BitSet(geometry.stripes)
        self.y_strip = BitSet(geometry.stripes)
        self.last = -1

    def __repr__(self):
        return f'{self.__class__.__name__}({self.geometry!r}, links={len(self)})'

    def __len__(self):
        return len(self.vertical)

    def add_link(self, x: int, y: int):
        """Insert the edge at column `x` and row `y`.

        Raises:
            PreconditionError: If the coordinates are outside the tile or the link does not come after the
                previous one in row-major order.
            CapacityError: If the horizontal gap does not fit the variable-byte encoding.
        """

        geometry = self.geometry
        if not (0 <= x < geometry.tile_size and 0 <= y < geometry.tile_size):
            raise PreconditionError(f'link ({x}, {y}) outside a {geometry.tile_size}-tile')
        index = (y << geometry.log_size) + x
        if index <= self.last:
            raise PreconditionError(f'link ({x}, {y}) is a duplicate or arrives out of row-major order')
        try:
            append_varbyte(self.horizontal, index - self.last)
        except RangeError as ex:
            raise CapacityError(f'link ({x}, {y}) does not fit the variable-byte encoding') from ex
        self.last = index
        self.vertical.append((x << geometry.log_size) + y)
        if geometry.stripes:
            self.x_strip.set(geometry.stripe_of(x))
            self.y_strip.set(geometry.stripe_of(y))

    def candidates(self) -> Tuple[bytes, bytes, bytes, bytes]:
        """Returns the four candidate bodies, indexed by tag."""

        horizontal = bytes(self.horizontal) + b'\x00'
        try:
            vertical = delta_encode(sorted(self.vertical))
        except RangeError as ex:
            raise CapacityError('vertical index does not fit the variable-byte encoding') from ex
        return horizontal, deflate_block(horizontal), vertical, deflate_block(vertical)

    def compress(self, x_tile: int, y_tile: int, out: bytearray) -> Tuple[int, int]:
        """Append the shortest encoding and the trailer to `out`.

        Returns:
            The encoding tag and the number of bytes written.

        Raises:
            PreconditionError: If the tile is empty.
            CapacityError: If a tile coordinate does not fit in 3 bytes.
        """

        if not self.vertical:
            raise PreconditionError('empty tiles are never stored')
        for name, value in (('x_tile', x_tile), ('y_tile', y_tile)):
            if not 0 <= value < COORDINATE_LIMIT:
                raise CapacityError(f'`{name}` {value} does not fit in 3 bytes')
        bodies = self.candidates()
        tag = choose_encoding(*(len(body) for body in bodies))
        start = len(out)
        out += bodies[tag]
        out += self.x_strip.data
        out += self.y_strip.data
        out += x_tile.to_bytes(3, 'little')
        out += y_tile.to_bytes(3, 'little')
        return tag, len(out) - start


class CompressedTile:
    """Decoder for stored tile blobs.

    Args:
        geometry (:obj:`TileGeometry`): Tile side and stripe count the blobs were written with.
    """

    def __init__(self, geometry: TileGeometry):
        self.geometry = geometry

    def __repr__(self):
        return f'{self.__class__.__name__}({self.geometry!r})'

    def coordinates(self, blob: ByteLike) -> Tuple[int, int]:
        """Returns the tile column and tile row recorded in the trailer."""

        if len(blob) < self.geometry.trailer_size:
            raise CorruptStreamError(f'tile blob of {len(blob)} bytes is shorter than its trailer')
        return int.from_bytes(blob[-6:-3], 'little'), int.from_bytes(blob[-3:], 'little')

    def x_strip(self, blob: ByteLike) -> ByteLike:
        """Returns the column stripe bytes."""

        trailer = self.geometry.trailer_size
        return blob[-trailer:-trailer + self.geometry.stripe_bytes]

    def y_strip(self, blob: ByteLike) -> ByteLike:
        """Returns the row stripe bytes."""

        return blob[-6 - self.geometry.stripe_bytes:-6]

    def _body(self, blob: ByteLike, tag: int, cursor: QueryCursor) -> ByteLike:
        cursor.bodies_decoded += 1
        body = blob[:len(blob) - self.geometry.trailer_size]
        if tag & ZIPPED:
            cursor.inflations += 1
            return inflate_block(body, max(cursor.scratch_size, self.geometry.scratch_size))
        return body

    def _gated(self, strip: ByteLike, coordinate: int, cursor: QueryCursor) -> bool:
        if self.geometry.stripes and not bit_is_set(strip, self.geometry.stripe_of(coordinate)):
            cursor.tiles_skipped += 1
            return True
        return False

    def row_entries(self, blob: ByteLike, tag: int, row: int, cursor: QueryCursor) -> Iterator[int]:
        """Yield the in-tile columns of the edges in `row`, in increasing order.

        The body is left untouched when the row's stripe bit is 0. Horizontal bodies are scanned up to the end
        of the row only; vertical bodies are scanned completely.

        Raises:
            CorruptStreamError: If the body cannot be decoded.
        """

        if self._gated(self.y_strip(blob), row, cursor):
            return
        geometry = self.geometry
        body = self._body(blob, tag, cursor)
        if tag & TRANSPOSED:
            mask, shift = geometry.mask, geometry.log_size
            for value in iter_delta(body):
                if value & mask == row:
                    yield value >> shift
        else:
            low = row << geometry.log_size
            high = low + geometry.tile_size
            for value in iter_delta(body):
                if value >= high:
                    break
                if value >= low:
                    yield value - low

    def column_entries(self, blob: ByteLike, tag: int, column: int, cursor: QueryCursor) -> Iterator[int]:
        """Yield the in-tile rows of the edges in `column`, in increasing order.

        Mirror of `row_entries()`: vertical bodies stop at the end of the column, horizontal ones are scanned
        completely.

        Raises:
            CorruptStreamError: If the body cannot be decoded.
        """

        if self._gated(self.x_strip(blob), column, cursor):
            return
        geometry = self.geometry
        body = self._body(blob, tag, cursor)
        if tag & TRANSPOSED:
            low = column << geometry.log_size
            high = low + geometry.tile_size
            for value in iter_delta(body):
                if value >= high:
                    break
                if value >= low:
                    yield value - low
        else:
            mask, shift = geometry.mask, geometry.log_size
            for value in iter_delta(body):
                if value & mask == column:
                    yield value >> shift

    def edges(self, blob: ByteLike, tag: int, cursor: QueryCursor) -> Iterator[Tuple[int, int]]:
        """Yield every edge of the tile as ``(row, column)``, in the order of the stored numbering."""

        geometry = self.geometry
        mask, shift = geometry.mask, geometry.log_size
        for value in iter_delta(self._body(blob, tag, cursor)):
            if tag & TRANSPOSED:
                yield value & mask, value >> shift
            else:
                yield value >> shift, value & mask


__all__ = (
    'TAG_HORIZONTAL',
    'TAG_HORIZONTAL_DEFLATE',
    'TAG_VERTICAL',
    'TAG_VERTICAL_DEFLATE',
    'COORDINATE_LIMIT',
    'choose_encoding',
    'TileGeometry',
    'UncompressedTile',
    'CompressedTile',
)
