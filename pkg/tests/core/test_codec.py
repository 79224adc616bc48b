"""Unit tests for webtiles.core.codec."""

import os

import pytest

from webtiles.core.codec import (
    VARBYTE_LIMIT,
    BitSet,
    append_varbyte,
    bit_is_set,
    deflate_block,
    delta_decode,
    delta_encode,
    inflate_block,
    iter_delta,
    varbyte_decode,
    varbyte_encode,
    varbyte_length,
)
from webtiles.core.exceptions import CorruptStreamError, PreconditionError, RangeError
from webtiles.core.generator import XorShift64Star


class TestVarByte:
    """Unit tests for the variable-byte integer encoding."""

    @pytest.mark.parametrize('value, encoded', [
        (0, b'\x00'),
        (2, b'\x02'),
        (63, b'\x3f'),
        (64, b'\x40\x40'),
        (16383, b'\x7f\xff'),
        (16384, b'\x80\x40\x00'),
        (4194303, b'\xbf\xff\xff'),
    ])
    def test_encode(self, value, encoded):
        """Test the exact bytes of `varbyte_encode()` at every length boundary."""

        assert varbyte_encode(value) == encoded
        assert varbyte_length(value) == len(encoded)
        assert varbyte_decode(encoded) == (value, len(encoded))

    @pytest.mark.parametrize('value', [-1, VARBYTE_LIMIT, VARBYTE_LIMIT + 1])
    def test_encode_out_of_range(self, value):
        """Test that values outside [0, 2^22) are rejected."""

        with pytest.raises(RangeError):
            varbyte_encode(value)
        with pytest.raises(ValueError):
            append_varbyte(bytearray(), value)

    def test_exhaustive_round_trip(self):
        """Test every value in [0, 2^22): canonical length on encoding, identity on decoding."""

        stream = bytearray()
        for value in range(VARBYTE_LIMIT):
            before = len(stream)
            append_varbyte(stream, value)
            assert len(stream) - before == varbyte_length(value)
        assert len(stream) == 64 + 2 * (0x4000 - 64) + 3 * (VARBYTE_LIMIT - 0x4000)
        pos = 0
        for value in range(VARBYTE_LIMIT):
            decoded, pos = varbyte_decode(stream, pos)
            assert decoded == value
        assert pos == len(stream)

    @pytest.mark.parametrize('seed', [1, 2, 3])
    def test_encode_matches_length(self, seed):
        """Test that `varbyte_encode()` agrees with `varbyte_length()` on random values."""

        rng = XorShift64Star(seed)
        for _ in range(20000):
            value = rng.next_below(VARBYTE_LIMIT >> (8 * rng.next_below(3)))
            assert len(varbyte_encode(value)) == varbyte_length(value)

    def test_decode_with_offset(self):
        """Test that decoding starts at the given position."""

        assert varbyte_decode(b'\x05\x40\x40', 1) == (64, 3)

    @pytest.mark.parametrize('stream', [b'\xc0', b'\xff\xff\xff', b'\x40', b'\x80\x00', b''])
    def test_decode_corrupt(self, stream):
        """Test that the reserved tag and truncated values are reported."""

        with pytest.raises(CorruptStreamError):
            varbyte_decode(stream)


class TestDelta:
    """Unit tests for delta coding with terminator."""

    @pytest.mark.parametrize('values, encoded', [
        ([], b'\x00'),
        ([0], b'\x01\x00'),
        ([1, 2, 6, 12, 15], b'\x02\x01\x04\x06\x03\x00'),
        ([100], b'\x40\x65\x00'),
    ])
    def test_encode_decode(self, values, encoded):
        """Test `delta_encode()` against hand-computed bytes and its inverse."""

        assert delta_encode(values) == encoded
        assert delta_decode(encoded) == (values, len(encoded))
        assert list(iter_delta(encoded)) == values

    def test_decode_stops_at_terminator(self):
        """Test that trailing bytes after the terminator are left alone."""

        assert delta_decode(b'\x02\x00\x07\x07') == ([1], 2)
        assert delta_decode(b'\x07\x02\x00', 1) == ([1], 3)

    @pytest.mark.parametrize('values', [[3, 3], [5, 4], [-1]])
    def test_encode_not_increasing(self, values):
        """Test that duplicate, decreasing or negative input is a precondition error."""

        with pytest.raises(PreconditionError):
            delta_encode(values)

    def test_encode_gap_too_large(self):
        """Test that a gap of 2^22 does not fit."""

        delta_encode([0, VARBYTE_LIMIT - 1])
        with pytest.raises(RangeError):
            delta_encode([0, VARBYTE_LIMIT + 1])
        with pytest.raises(RangeError):
            delta_encode([VARBYTE_LIMIT - 1])

    @pytest.mark.parametrize('stream', [b'', b'\x02\x01', b'\x02\x40', b'\x02\xc0\x00'])
    def test_decode_corrupt(self, stream):
        """Test that a missing terminator or bad varbyte is reported by both decoders."""

        with pytest.raises(CorruptStreamError):
            delta_decode(stream)
        with pytest.raises(CorruptStreamError):
            list(iter_delta(stream))

    @pytest.mark.parametrize('seed, length, max_gap', [
        (1, 0, 1),
        (2, 1, VARBYTE_LIMIT - 1),
        (3, 17, 64),
        (4, 1000, 1 << 14),
        (5, 10000, 1),
        (6, 10000, 200),
        (7, 10000, 300000),
    ])
    def test_random_round_trip(self, seed, length, max_gap):
        """Test that random strictly increasing sequences survive encoding."""

        rng = XorShift64Star(seed)
        values, last = [], -1
        for _ in range(length):
            last += 1 + rng.next_below(max_gap)
            values.append(last)
        encoded = delta_encode(values)
        assert encoded[-1] == 0
        assert delta_decode(encoded) == (values, len(encoded))
        assert list(iter_delta(encoded)) == values

    def test_iter_delta_is_lazy(self):
        """Test that a consumer stopping early never sees the missing terminator."""

        values = iter_delta(b'\x02\x01\x04')
        assert next(values) == 1
        assert next(values) == 2


class TestDeflate:
    """Unit tests for raw DEFLATE blocks."""

    @pytest.mark.parametrize('data', [b'', b'abc', bytes(1000), os.urandom(3000)])
    def test_round_trip(self, data):
        """Test that `inflate_block()` restores the input."""

        assert inflate_block(deflate_block(data), len(data)) == data

    @pytest.mark.parametrize('seed, size, alphabet', [
        (1, 1 << 20, 256),
        (2, 1 << 20, 4),
        (3, (1 << 20) - 1, 1),
        (4, 65537, 256),
    ])
    def test_random_round_trip(self, seed, size, alphabet):
        """Test seeded blocks up to 2^20 bytes, from incompressible to constant."""

        rng = XorShift64Star(seed)
        data = bytes(rng.next_below(alphabet) for _ in range(size))
        stream = deflate_block(data)
        assert inflate_block(stream, size) == data
        if alphabet < 256:
            assert len(stream) < size

    def test_raw_stream(self):
        """Test that the stream carries no zlib header."""

        stream = deflate_block(bytes(100))
        assert stream[:2] != b'\x78\xda'
        assert len(stream) < 100

    def test_overflow(self):
        """Test that output beyond `max_out` is an error."""

        with pytest.raises(CorruptStreamError):
            inflate_block(deflate_block(bytes(100)), 99)

    def test_truncated(self):
        """Test that a truncated stream is an error."""

        stream = deflate_block(os.urandom(500))
        with pytest.raises(CorruptStreamError):
            inflate_block(stream[:len(stream) // 2], 500)

    def test_trailing_garbage(self):
        """Test that bytes after the end of the stream are an error."""

        with pytest.raises(CorruptStreamError):
            inflate_block(deflate_block(b'abc') + b'\x00', 3)

    def test_malformed(self):
        """Test that an invalid block type is an error."""

        with pytest.raises(CorruptStreamError):
            inflate_block(b'\xff\xff\xff\xff', 100)


class TestBitSet:
    """Unit tests for BitSet."""

    def test_set_get(self):
        """Test LSB-first bit placement."""

        bits = BitSet(10)
        assert len(bits.data) == 2
        for index in (0, 1, 3, 9):
            bits.set(index)
        assert bytes(bits) == b'\x0b\x02'
        assert bits.get(3)
        assert not bits.get(2)
        assert list(bits) == [0, 1, 3, 9]
        assert bit_is_set(bits.data, 9)
        assert not bit_is_set(bits.data, 8)

    def test_clear(self):
        """Test that `clear()` resets every bit."""

        bits = BitSet.from_bytes(b'\xff', 8)
        bits.clear()
        assert bytes(bits) == b'\x00'
        assert len(bits) == 8

    def test_empty(self):
        """Test that a zero-sized set has no bytes."""

        assert bytes(BitSet(0)) == b''

    def test_index_out_of_range(self):
        """Test that bits outside the set are rejected."""

        with pytest.raises(IndexError):
            BitSet(4).set(4)
        with pytest.raises(IndexError):
            BitSet(4).get(-1)

    def test_wrong_backing_size(self):
        """Test that the backing bytes must match the size."""

        with pytest.raises(PreconditionError):
            BitSet.from_bytes(b'\x00\x00', 8)
