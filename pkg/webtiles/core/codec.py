"""Low-level encodings shared by the LM and the 2D representations.

Variable-byte integers carry their length in the two most significant bits of the first byte:

    ======  ======  ==============
    tag     bytes   payload bits
    ======  ======  ==============
    ``00``  1       6
    ``01``  2       14
    ``10``  3       22
    ``11``  -       reserved
    ======  ======  ==============

The payload follows the tag most significant group first, so single-byte values read as themselves.

Increasing sequences are delta coded with a -1 origin: the first value is stored plus one, then the gaps, then
a terminating 0. Since every stored element of a strictly increasing sequence is at least 1, the terminator is
unambiguous.
"""

import zlib
from typing import Iterable, Iterator, List, Tuple, Union

import attr

from .exceptions import CorruptStreamError, PreconditionError, RangeError

ByteLike = Union[bytes, bytearray, memoryview]

VARBYTE_LIMIT = 1 << 22
DEFLATE_LEVEL = 9
_RAW_WINDOW_BITS = -zlib.MAX_WBITS


def varbyte_length(value: int) -> int:
    """Returns the canonical encoded length of `value` in bytes."""

    if value < 0x40:
        return 1
    if value < 0x4000:
        return 2
    return 3


def append_varbyte(out: bytearray, value: int):
    """Append the canonical encoding of `value` to `out`.

    Raises:
        RangeError: If `value` is outside [0, 2^22).
    """

    if value < 0 or value >= VARBYTE_LIMIT:
        raise RangeError(f'value {value} outside [0, {VARBYTE_LIMIT})')
    if value < 0x40:
        out.append(value)
    elif value < 0x4000:
        out.append(0x40 | (value >> 8))
        out.append(value & 0xFF)
    else:
        out.append(0x80 | (value >> 16))
        out.append((value >> 8) & 0xFF)
        out.append(value & 0xFF)


def varbyte_encode(value: int) -> bytes:
    """Encode one integer in [0, 2^22) using 1 to 3 bytes.

    Raises:
        RangeError: If `value` is outside [0, 2^22).
    """

    out = bytearray()
    append_varbyte(out, value)
    return bytes(out)


def varbyte_decode(buffer: ByteLike, pos: int = 0) -> Tuple[int, int]:
    """Decode one integer starting at `pos`.

    Returns:
        The decoded value and the position just past it.

    Raises:
        CorruptStreamError: On the reserved tag ``11`` or a truncated value.
    """

    try:
        first = buffer[pos]
        tag = first >> 6
        if tag == 0:
            return first, pos + 1
        if tag == 1:
            return ((first & 0x3F) << 8) | buffer[pos + 1], pos + 2
        if tag == 2:
            return ((first & 0x3F) << 16) | (buffer[pos + 1] << 8) | buffer[pos + 2], pos + 3
    except IndexError:
        raise CorruptStreamError(f'truncated varbyte at position {pos}')
    raise CorruptStreamError(f'reserved varbyte tag at position {pos}')


def delta_encode(values: Iterable[int]) -> bytes:
    """Delta code a strictly increasing sequence, terminator included.

    Raises:
        PreconditionError: If the sequence is not strictly increasing or starts below 0.
        RangeError: If the first value plus one or a gap reaches 2^22.
    """

    out = bytearray()
    last = -1
    for value in values:
        if value <= last:
            raise PreconditionError(f'sequence not strictly increasing at {value} (previous {last})')
        append_varbyte(out, value - last)
        last = value
    out.append(0)
    return bytes(out)


def iter_delta(buffer: ByteLike, pos: int = 0) -> Iterator[int]:
    """Lazily decode a delta coded sequence.

    Consumers may stop early; the terminator is only checked when iteration runs to the end.

    Raises:
        CorruptStreamError: If the buffer ends before the terminator or holds a reserved tag.
    """

    size = len(buffer)
    last = -1
    while True:
        if pos >= size:
            raise CorruptStreamError('delta stream ends without terminator')
        first = buffer[pos]
        tag = first >> 6
        if tag == 0:
            if first == 0:
                return
            gap = first
            pos += 1
        elif tag == 1 and pos + 1 < size:
            gap = ((first & 0x3F) << 8) | buffer[pos + 1]
            pos += 2
        elif tag == 2 and pos + 2 < size:
            gap = ((first & 0x3F) << 16) | (buffer[pos + 1] << 8) | buffer[pos + 2]
            pos += 3
        else:
            gap, pos = varbyte_decode(buffer, pos)  # raises with the precise reason
        last += gap
        yield last


def delta_decode(buffer: ByteLike, pos: int = 0) -> Tuple[List[int], int]:
    """Decode a whole delta coded sequence.

    Returns:
        The values and the position just past the terminator.

    Raises:
        CorruptStreamError: If the buffer ends before the terminator or holds a reserved tag.
    """

    values = []
    last = -1
    while True:
        if pos >= len(buffer):
            raise CorruptStreamError('delta stream ends without terminator')
        gap, pos = varbyte_decode(buffer, pos)
        if gap == 0:
            return values, pos
        last += gap
        values.append(last)


def deflate_block(data: ByteLike) -> bytes:
    """Compress `data` into a raw DEFLATE stream (no header, no checksum) at the best compression level."""

    deflater = zlib.compressobj(DEFLATE_LEVEL, zlib.DEFLATED, _RAW_WINDOW_BITS)
    return deflater.compress(data) + deflater.flush()


def inflate_block(data: ByteLike, max_out: int) -> bytes:
    """Decompress a raw DEFLATE stream whose decoded size is at most `max_out` bytes.

    Raises:
        CorruptStreamError: If the stream is malformed, truncated, followed by garbage or decodes to more than
            `max_out` bytes.
    """

    inflater = zlib.decompressobj(_RAW_WINDOW_BITS)
    try:
        out = inflater.decompress(data, max_out + 1)
    except zlib.error as ex:
        raise CorruptStreamError(f'malformed deflate stream: {ex}') from ex
    if len(out) > max_out:
        raise CorruptStreamError(f'deflate stream decodes to more than {max_out} bytes')
    if not inflater.eof:
        raise CorruptStreamError('truncated deflate stream')
    if inflater.unused_data:
        raise CorruptStreamError(f'{len(inflater.unused_data)} bytes after the end of the deflate stream')
    return out


@attr.s(auto_attribs=True, eq=True)
class BitSet:
    # noinspection PyUnresolvedReferences
    """Fixed-size LSB-first bit array.

    Bit `i` lives in byte ``i >> 3`` under mask ``1 << (i & 7)``; padding bits of the last byte stay 0.

    Attributes:
        size (int): Number of logical bits.
        data (bytearray): Backing bytes, ``ceil(size / 8)`` of them.
    """

    size: int = 0
    data: bytearray = attr.ib(default=None)

    def __attrs_post_init__(self):
        if self.data is None:
            self.data = bytearray((self.size + 7) >> 3)
        elif len(self.data) != (self.size + 7) >> 3:
            raise PreconditionError(f'{len(self.data)} bytes cannot back {self.size} bits')

    def __len__(self):
        return self.size

    def __bytes__(self):
        return bytes(self.data)

    def __iter__(self) -> Iterator[int]:
        """Iterate over the indices of set bits in increasing order."""

        for index, byte in enumerate(self.data):
            while byte:
                low = byte & -byte
                yield (index << 3) + low.bit_length() - 1
                byte ^= low

    def _check(self, index: int):
        if not 0 <= index < self.size:
            raise IndexError(f'bit {index} outside [0, {self.size})')

    def set(self, index: int):
        """Set bit `index`."""

        self._check(index)
        self.data[index >> 3] |= 1 << (index & 7)

    def get(self, index: int) -> bool:
        """Returns whether bit `index` is set."""

        self._check(index)
        return bool(self.data[index >> 3] & (1 << (index & 7)))

    def clear(self):
        """Reset every bit to 0."""

        self.data[:] = bytes(len(self.data))

    @classmethod
    def from_bytes(cls, data: ByteLike, size: int) -> 'BitSet':
        """Wrap a copy of `data` as a set of `size` bits."""

        return cls(size, bytearray(data))


def bit_is_set(data: ByteLike, index: int) -> bool:
    """Returns whether bit `index` is set in the LSB-first byte string `data`."""

    return bool(data[index >> 3] & (1 << (index & 7)))


__all__ = (
    'VARBYTE_LIMIT',
    'DEFLATE_LEVEL',
    'varbyte_length',
    'append_varbyte',
    'varbyte_encode',
    'varbyte_decode',
    'delta_encode',
    'iter_delta',
    'delta_decode',
    'deflate_block',
    'inflate_block',
    'BitSet',
    'bit_is_set',
)
