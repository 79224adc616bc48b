"""Data tests for the 2D compression ratio on public web crawls."""

import pytest

from webtiles.core.graph import count_text_lines, iter_text_lists
from webtiles.core.stripes import StripeGraph

from .datasets import DATASETS_FILE, DEFAULT_DATASETS, dataset_path, load_datasets

TOLERANCE = 0.15


@pytest.fixture(scope='module')
def datasets():
    """Fixture that returns the dataset registry, skipping when it has just been created."""

    registry = load_datasets()
    if registry is None:
        pytest.skip(f'{DATASETS_FILE.name} not found. A default one has been created.')
    return registry


@pytest.fixture(params=sorted(DEFAULT_DATASETS))
def dataset(request, datasets):
    """Fixture that returns one registry entry whose graph exists locally."""

    name = request.param
    if name not in datasets:
        pytest.skip(f'{name} not listed in {DATASETS_FILE.name}')
    entry = datasets[name]
    path = dataset_path(entry)
    if not path.is_file():
        pytest.skip(f'{name} not found at {path}')
    return entry, path


def compress(path, tile_size, stripes):
    """Compress the text graph at `path` in two streaming passes."""

    with path.open('rb') as f:
        n = count_text_lines(f)
        f.seek(0)
        return StripeGraph.compress_lines(iter_text_lists(f), n, tile_size, stripes)


def test_bits_per_link(dataset):
    """Test that the compressed size stays within 15% of the expected bits per link."""

    entry, path = dataset
    graph = compress(path, entry.get('tile_size', 1024), entry.get('stripes', 0))
    assert graph.stats().bits_per_link == pytest.approx(entry['bits_per_link'], rel=TOLERANCE)


def test_round_trip(dataset):
    """Test that every list survives compression on the full crawl."""

    _, path = dataset
    graph = compress(path, 1024, 8)
    with path.open('rb') as f:
        for node, expected in enumerate(iter_text_lists(f)):
            assert graph.successors(node) == expected
