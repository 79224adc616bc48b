"""Registry of locally supplied web crawls, read from datasets.json at the project root.

Each entry names a text graph and the bits per link expected for it at a given tile size and stripe count.
"""

import json
from pathlib import Path
from typing import Dict, Optional

from jsonschema import validate, ValidationError

DATASETS_FILE = Path(__file__).parent.parent / 'datasets.json'
DATASET_SCHEMA = {
    'type': 'object',
    'properties': {
        'path': {'type': 'string'},
        'bits_per_link': {'type': 'number', 'exclusiveMinimum': 0},
        'tile_size': {'type': 'integer', 'minimum': 1},
        'stripes': {'type': 'integer', 'minimum': 0},
    },
    'required': [
        'path',
        'bits_per_link',
    ],
}
DATASETS_SCHEMA = {
    'type': 'object',
    'additionalProperties': DATASET_SCHEMA,
}
DEFAULT_DATASETS = {
    'eu-2005': {
        'path': 'data/eu-2005.txt',
        'bits_per_link': 1.72,
        'tile_size': 1024,
        'stripes': 0,
    },
    'indochina-2004': {
        'path': 'data/indochina-2004.txt',
        'bits_per_link': 0.98,
        'tile_size': 1024,
        'stripes': 0,
    },
}
validate(instance=DEFAULT_DATASETS, schema=DATASETS_SCHEMA)


def load_datasets(registry: Path = DATASETS_FILE) -> Optional[Dict[str, dict]]:
    """Returns the validated registry, or None after writing a default one when `registry` does not exist.

    Raises:
        RuntimeError: If the registry is not valid JSON or does not match the schema.
    """

    try:
        with registry.open('rt', encoding='utf-8') as f:
            datasets = json.load(f)
    except FileNotFoundError:
        with registry.open('wt', encoding='utf-8') as f:
            json.dump(DEFAULT_DATASETS, f, indent=2, sort_keys=True)
        return None
    except json.JSONDecodeError as ex:
        raise RuntimeError(f'Invalid json file {registry}: {ex!s}')
    try:
        validate(instance=datasets, schema=DATASETS_SCHEMA)
    except ValidationError as ex:
        raise RuntimeError(f'Invalid {registry.name} format: {ex.message}')
    return datasets


def dataset_path(entry: dict, registry: Path = DATASETS_FILE) -> Path:
    """Returns the graph path of `entry`, relative paths taken from the registry's directory."""

    path = Path(entry['path'])
    return path if path.is_absolute() else registry.parent / path


__all__ = (
    'DATASETS_FILE',
    'DEFAULT_DATASETS',
    'load_datasets',
    'dataset_path',
)
