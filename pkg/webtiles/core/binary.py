"""Little-endian readers and writers for the compressed file formats."""

import struct
from typing import BinaryIO, Tuple

import numpy as np

from .exceptions import FormatError

U64 = np.dtype('<u8')


def write_table(sink: BinaryIO, table: np.ndarray):
    """Write `table` as consecutive little-endian u64 values."""

    sink.write(np.ascontiguousarray(table, dtype=U64).tobytes())


class BinaryReader:
    """Sequential reader over an in-memory file image.

    Every read checks the remaining length and raises FormatError instead of returning short data.

    Args:
        data (bytes): The whole file.
        name (str): Format name used in error messages.
    """

    def __init__(self, data: bytes, name: str):
        self._data = data
        self._pos = 0
        self._name = name

    def __repr__(self):
        return f'{self.__class__.__name__}(name={self._name!r}, pos={self._pos}, size={len(self._data)})'

    def _take(self, size: int, what: str) -> bytes:
        if size < 0 or self._pos + size > len(self._data):
            raise FormatError(f'{self._name}: truncated while reading {what}')
        chunk = self._data[self._pos:self._pos + size]
        self._pos += size
        return chunk

    def unpack(self, fmt: str, what: str) -> Tuple:
        """Read and unpack one `struct` record."""

        return struct.unpack(fmt, self._take(struct.calcsize(fmt), what))

    def table(self, count: int, what: str) -> np.ndarray:
        """Read `count` little-endian u64 values as a native uint64 array."""

        if count > len(self._data):
            raise FormatError(f'{self._name}: truncated while reading {what}')
        return np.frombuffer(self._take(count * U64.itemsize, what), dtype=U64).astype(np.uint64)

    def raw(self, size: int, what: str) -> bytes:
        """Read `size` raw bytes."""

        return self._take(size, what)

    def expect_end(self):
        """Raise FormatError if unread bytes remain."""

        if self._pos != len(self._data):
            raise FormatError(f'{self._name}: {len(self._data) - self._pos} unexpected trailing bytes')


def sniff_magic(source: BinaryIO) -> bytes:
    """Returns the first four bytes of `source` and rewinds it."""

    magic = source.read(4)
    source.seek(0)
    return magic


__all__ = (
    'U64',
    'write_table',
    'BinaryReader',
    'sniff_magic',
)
