"""Unit tests for webtiles.core.tile."""

import pytest

from webtiles.core.cursor import QueryCursor
from webtiles.core.exceptions import CapacityError, CorruptStreamError, PreconditionError
from webtiles.core.tile import (
    TAG_HORIZONTAL,
    TAG_HORIZONTAL_DEFLATE,
    TAG_VERTICAL,
    TAG_VERTICAL_DEFLATE,
    CompressedTile,
    TileGeometry,
    UncompressedTile,
    choose_encoding,
)

EXAMPLE_LINKS = [(1, 0), (2, 0), (2, 1), (0, 3), (3, 3)]


def example_tile(stripes: int = 4) -> UncompressedTile:
    """The 4-tile with edges (x, y) = (1,0), (2,0), (2,1), (0,3), (3,3)."""

    tile = UncompressedTile(TileGeometry(4, stripes))
    for x, y in EXAMPLE_LINKS:
        tile.add_link(x, y)
    return tile


def blob_with_tag(tile: UncompressedTile, tag: int) -> bytes:
    """Assemble a blob that stores `tile` with the given encoding instead of the shortest one."""

    return tile.candidates()[tag] + bytes(tile.x_strip) + bytes(tile.y_strip) + bytes(6)


class TestChooseEncoding:
    """Unit tests for choose_encoding()."""

    @pytest.mark.parametrize('lengths, tag', [
        ((6, 8, 6, 8), TAG_HORIZONTAL),
        ((5, 5, 9, 9), TAG_HORIZONTAL),
        ((9, 5, 9, 5), TAG_HORIZONTAL_DEFLATE),
        ((9, 9, 5, 9), TAG_VERTICAL),
        ((9, 9, 9, 5), TAG_VERTICAL_DEFLATE),
        ((9, 9, 5, 5), TAG_VERTICAL),
        ((7, 9, 9, 7), TAG_HORIZONTAL),
        ((9, 5, 5, 9), TAG_HORIZONTAL_DEFLATE),
        ((3, 9, 2, 9), TAG_VERTICAL),
    ])
    def test_order(self, lengths, tag):
        """Test the shortest-body selection and its tie order."""

        assert choose_encoding(*lengths) == tag


class TestTileGeometry:
    """Unit tests for TileGeometry."""

    def test_fields(self):
        """Test the derived sizes."""

        geometry = TileGeometry(2048, 8)
        assert geometry.log_size == 11
        assert geometry.stripe_bytes == 1
        assert geometry.trailer_size == 8
        assert geometry.scratch_size == 3 * 2048 * 2048 + 1
        assert geometry.stripe_of(300) == 1
        assert TileGeometry(1024, 0).trailer_size == 6
        assert TileGeometry(128, 128).stripe_bytes == 16

    @pytest.mark.parametrize('tile_size, stripes', [(0, 0), (100, 0), (128, 3), (128, -8)])
    def test_not_power_of_two(self, tile_size, stripes):
        """Test that parameters must be powers of two."""

        with pytest.raises(PreconditionError):
            TileGeometry(tile_size, stripes)


class TestUncompressedTile:
    """Unit tests for UncompressedTile."""

    def test_add_link(self):
        """Test the horizontal stream, the vertical indices and the stripes of the example tile."""

        tile = example_tile()
        assert len(tile) == 5
        assert sorted(tile.vertical) == [3, 4, 8, 9, 15]
        assert bytes(tile.x_strip) == b'\x0f'
        assert bytes(tile.y_strip) == b'\x0b'

    def test_candidates(self):
        """Test the plain candidates of the example tile."""

        candidates = example_tile().candidates()
        assert candidates[TAG_HORIZONTAL] == bytes([0x02, 0x01, 0x04, 0x06, 0x03, 0x00])
        assert candidates[TAG_VERTICAL] == bytes([0x04, 0x01, 0x04, 0x01, 0x06, 0x00])
        assert len(candidates[TAG_HORIZONTAL_DEFLATE]) > 6
        assert len(candidates[TAG_VERTICAL_DEFLATE]) > 6

    def test_compress(self):
        """Test the stored blob of the example tile."""

        out = bytearray(b'prefix')
        tag, written = example_tile().compress(5, 7, out)
        assert tag == TAG_HORIZONTAL
        assert written == 14
        assert bytes(out[6:]) == bytes([0x02, 0x01, 0x04, 0x06, 0x03, 0x00, 0x0f, 0x0b, 5, 0, 0, 7, 0, 0])

    def test_compress_without_stripes(self):
        """Test that K=0 stores no stripe bytes."""

        out = bytearray()
        _, written = example_tile(0).compress(0, 0, out)
        assert written == 12

    def test_single_edge_tie(self):
        """Test that equal plain candidates select the horizontal numbering."""

        tile = UncompressedTile(TileGeometry(128, 8))
        tile.add_link(0, 0)
        candidates = tile.candidates()
        assert candidates[TAG_HORIZONTAL] == candidates[TAG_VERTICAL] == b'\x01\x00'
        assert tile.compress(0, 0, bytearray())[0] == TAG_HORIZONTAL

    def test_dense_tile_is_deflated(self):
        """Test that a full tile picks a deflated body."""

        tile = UncompressedTile(TileGeometry(128, 0))
        for y in range(128):
            for x in range(128):
                tile.add_link(x, y)
        assert tile.compress(0, 0, bytearray())[0] in (TAG_HORIZONTAL_DEFLATE, TAG_VERTICAL_DEFLATE)

    @pytest.mark.parametrize('x, y', [(2, 0), (0, 0), (1, 0)])
    def test_out_of_order(self, x, y):
        """Test that duplicate or earlier links are rejected."""

        tile = UncompressedTile(TileGeometry(4, 0))
        tile.add_link(1, 0)
        tile.add_link(3, 0)
        with pytest.raises(PreconditionError):
            tile.add_link(x, y)

    @pytest.mark.parametrize('x, y', [(4, 0), (0, 4), (-1, 0)])
    def test_outside(self, x, y):
        """Test that coordinates must lie inside the tile."""

        with pytest.raises(PreconditionError):
            UncompressedTile(TileGeometry(4, 0)).add_link(x, y)

    def test_gap_capacity(self):
        """Test that an index gap beyond the variable-byte encoding is a capacity error."""

        tile = UncompressedTile(TileGeometry(4096, 0))
        with pytest.raises(CapacityError):
            tile.add_link(0, 1024)

    def test_compress_empty(self):
        """Test that empty tiles cannot be stored."""

        with pytest.raises(PreconditionError):
            UncompressedTile(TileGeometry(4, 0)).compress(0, 0, bytearray())

    def test_coordinate_capacity(self):
        """Test that tile coordinates must fit in 3 bytes."""

        with pytest.raises(CapacityError):
            example_tile().compress(1 << 24, 0, bytearray())
        with pytest.raises(CapacityError):
            example_tile().compress(0, 1 << 24, bytearray())


class TestCompressedTile:
    """Unit tests for CompressedTile."""

    @pytest.fixture
    def decoder(self):
        """Fixture that returns a decoder for 4-tiles with 4 stripes."""
        return CompressedTile(TileGeometry(4, 4))

    @pytest.fixture
    def blob(self):
        """Fixture that returns the stored example tile."""
        out = bytearray()
        example_tile().compress(5, 7, out)
        return bytes(out)

    def test_coordinates(self, decoder, blob):
        """Test the trailer fields."""

        assert decoder.coordinates(blob) == (5, 7)
        assert bytes(decoder.x_strip(blob)) == b'\x0f'
        assert bytes(decoder.y_strip(blob)) == b'\x0b'
        with pytest.raises(CorruptStreamError):
            decoder.coordinates(blob[:7])

    @pytest.mark.parametrize('tag', [0, 1, 2, 3])
    @pytest.mark.parametrize('row, columns', [(0, [1, 2]), (1, [2]), (2, []), (3, [0, 3])])
    def test_row_entries(self, decoder, tag, row, columns):
        """Test row decoding for every encoding."""

        blob = blob_with_tag(example_tile(), tag)
        assert list(decoder.row_entries(blob, tag, row, QueryCursor())) == columns

    @pytest.mark.parametrize('tag', [0, 1, 2, 3])
    @pytest.mark.parametrize('column, rows', [(0, [3]), (1, [0]), (2, [0, 1]), (3, [3])])
    def test_column_entries(self, decoder, tag, column, rows):
        """Test column decoding for every encoding."""

        blob = blob_with_tag(example_tile(), tag)
        assert list(decoder.column_entries(blob, tag, column, QueryCursor())) == rows

    def test_stripe_gate(self, decoder, blob):
        """Test that a row with an empty stripe is answered without touching the body."""

        cursor = QueryCursor()
        assert list(decoder.row_entries(blob, 0, 2, cursor)) == []
        assert (cursor.bodies_decoded, cursor.tiles_skipped) == (0, 1)
        assert list(decoder.row_entries(blob, 0, 3, cursor)) == [0, 3]
        assert (cursor.bodies_decoded, cursor.tiles_skipped) == (1, 1)

    def test_no_stripes_decodes(self):
        """Test that without stripes every query decodes the body."""

        out = bytearray()
        example_tile(0).compress(0, 0, out)
        cursor = QueryCursor()
        assert list(CompressedTile(TileGeometry(4, 0)).row_entries(out, 0, 2, cursor)) == []
        assert (cursor.bodies_decoded, cursor.tiles_skipped) == (1, 0)

    def test_column_gate(self):
        """Test that a column outside every stripe skips the body."""

        tile = UncompressedTile(TileGeometry(8, 2))
        tile.add_link(0, 0)
        out = bytearray()
        tile.compress(0, 0, out)
        cursor = QueryCursor()
        assert list(CompressedTile(TileGeometry(8, 2)).column_entries(out, 0, 6, cursor)) == []
        assert cursor.bodies_decoded == 0
        assert cursor.tiles_skipped == 1

    @pytest.mark.parametrize('tag', [0, 1, 2, 3])
    def test_edges(self, decoder, tag):
        """Test that every edge is listed once as (row, column)."""

        edges = list(decoder.edges(blob_with_tag(example_tile(), tag), tag, QueryCursor()))
        assert sorted(edges) == sorted((y, x) for x, y in EXAMPLE_LINKS)

    def test_inflation_counter(self, decoder):
        """Test that only deflated bodies count as inflations."""

        cursor = QueryCursor()
        list(decoder.row_entries(blob_with_tag(example_tile(), 1), 1, 0, cursor))
        list(decoder.row_entries(blob_with_tag(example_tile(), 2), 2, 0, cursor))
        assert (cursor.bodies_decoded, cursor.inflations) == (2, 1)

    def test_corrupt_body(self, decoder):
        """Test that an undecodable deflated body is reported."""

        blob = b'\xff\xff' + b'\x0f\x0b' + bytes(6)
        with pytest.raises(CorruptStreamError):
            list(decoder.row_entries(blob, 1, 0, QueryCursor()))
        with pytest.raises(CorruptStreamError):
            list(decoder.column_entries(b'\x02\x01' + b'\x0f\x0b' + bytes(6), 0, 0, QueryCursor()))

    def test_last_index_of_largest_tile(self):
        """Test that the bottom-right edge of a 2048-tile alone does not fit the encoding."""

        tile = UncompressedTile(TileGeometry(2048, 0))
        tile.add_link(2046, 2047)
        with pytest.raises(CapacityError):
            UncompressedTile(TileGeometry(2048, 0)).add_link(2047, 2047)
