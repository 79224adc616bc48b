"""Random access benchmark: bits per link against mean query time.

Each parameter point compresses the input graph, then answers the same sample of nodes `runs` times in a row.
Wall-clock time is taken around the whole sample loop and divided by the sample size.
"""

import csv
import logging
import time
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

import attr

from .core.base import CompressedGraph
from .core.cursor import QueryCursor
from .core.exceptions import GraphValidationError, ParameterError, UndefinedRatioError
from .core.generator import XorShift64Star
from .core.graph import AdjacencyGraph, parse_text_graph, transpose
from .core.lm import BENCHMARK_HS, LmGraph
from .core.stripes import BENCHMARK_STRIPES, BENCHMARK_TILES, StripeGraph

logger = logging.getLogger(__name__)

METHODS = ('lm', '2d')
MODES = ('succ', 'pred')
DEFAULT_SAMPLES = 100000
DEFAULT_RUNS = {'lm': 10, '2d': 4}
CSV_FIELDS = ('method', 'param1', 'param2', 'bits_per_link', 'mean_us', 'runs', 'samples', 'seed')
TIMING_FIELDS = ('mean_us',)


def _choice(options: Sequence[str]):
    def validate(_, attribute, value):
        if value not in options:
            raise ParameterError(f'`{attribute.name}` should be one of {options}, got {value!r}')
    return validate


def _positive(_, attribute, value):
    if value is not None and value < 1:
        raise ParameterError(f'`{attribute.name}` should be at least 1, got {value}')


def _non_empty(_, attribute, value):
    if not value:
        raise ParameterError(f'`{attribute.name}` should not be empty')


@attr.s(auto_attribs=True, kw_only=True)
class BenchConfig:
    # noinspection PyUnresolvedReferences
    """Benchmark configuration.

    Attributes:
        input_path (str): Text graph to compress and query.
        method (str): ``lm`` or ``2d``.
        h_values (tuple of int): Chunk heights tried by ``lm``.
        tile_values (tuple of int): Tile sizes tried by ``2d``.
        stripe_values (tuple of int): Stripe counts tried by ``2d`` for every tile size; 0 is the plain variant.
        samples (int): Number of sampled nodes, drawn with replacement.
        runs (int, optional): Repetitions of the whole sample. Defaults to 10 for ``lm`` and 4 for ``2d``.
        seed (int): Seed of the sampling generator.
        mode (str): ``succ`` or ``pred``. LM answers predecessor queries through the transposed graph.
    """

    input_path: str = ''
    method: str = attr.ib(default='2d', validator=_choice(METHODS))
    h_values: Tuple[int, ...] = attr.ib(default=BENCHMARK_HS, converter=tuple, validator=_non_empty)
    tile_values: Tuple[int, ...] = attr.ib(default=BENCHMARK_TILES, converter=tuple, validator=_non_empty)
    stripe_values: Tuple[int, ...] = attr.ib(default=BENCHMARK_STRIPES, converter=tuple, validator=_non_empty)
    samples: int = attr.ib(default=DEFAULT_SAMPLES, validator=_positive)
    runs: Optional[int] = attr.ib(default=None, validator=_positive)
    seed: int = 0
    mode: str = attr.ib(default='succ', validator=_choice(MODES))

    @property
    def effective_runs(self) -> int:
        """int: `runs`, or the method's default when unset."""

        return self.runs if self.runs is not None else DEFAULT_RUNS[self.method]

    def points(self) -> List[Tuple[int, Optional[int]]]:
        """Returns the parameter grid as ``(param1, param2)`` pairs."""

        if self.method == 'lm':
            return [(h, None) for h in self.h_values]
        return [(tile_size, stripes) for tile_size in self.tile_values for stripes in self.stripe_values]


@attr.s(auto_attribs=True)
class BenchRecord:
    # noinspection PyUnresolvedReferences
    """Result of one parameter point.

    Attributes:
        method (str): ``lm``, ``2d-stripes`` or ``2d-nostripes``.
        param1 (int): Chunk height for LM, tile size for 2D.
        param2 (int, optional): Stripe count for 2D.
        bits_per_link (float): File size in bits per edge.
        run_times (:obj:`list` of float): Seconds taken by each run over the whole sample.
        samples (int): Sample size.
        seed (int): Sampling seed.
        decoded_bodies (int): Chunks or tile bodies decoded during one run.
    """

    method: str
    param1: int
    param2: Optional[int]
    bits_per_link: float
    run_times: List[float]
    samples: int
    seed: int
    decoded_bodies: int = 0

    @property
    def runs(self) -> int:
        """int: Number of runs."""

        return len(self.run_times)

    @property
    def mean_us(self) -> float:
        """float: Mean over runs of the per-query time in microseconds."""

        return sum(self.run_times) / len(self.run_times) / self.samples * 1e6

    @property
    def min_us(self) -> float:
        """float: Per-query time of the fastest run in microseconds."""

        return min(self.run_times) / self.samples * 1e6

    def as_row(self) -> Dict[str, str]:
        """Returns the CSV row of the record."""

        return {
            'method': self.method,
            'param1': str(self.param1),
            'param2': '' if self.param2 is None else str(self.param2),
            'bits_per_link': f'{self.bits_per_link:.4f}',
            'mean_us': f'{self.mean_us:.3f}',
            'runs': str(self.runs),
            'samples': str(self.samples),
            'seed': str(self.seed),
        }


def sample_nodes(n: int, samples: int, seed: int) -> List[int]:
    """Draw `samples` node ids uniformly from [0, n), with replacement.

    Raises:
        ParameterError: If `n` is 0.
    """

    if n <= 0:
        raise ParameterError('cannot sample nodes of an empty graph')
    rng = XorShift64Star(seed)
    return [rng.next_below(n) for _ in range(samples)]


def time_queries(query: Callable[[int, QueryCursor], List[int]], nodes: Sequence[int], runs: int,
                 cursor: QueryCursor) -> Tuple[List[float], int]:
    """Run `query` over `nodes` `runs` times after one warm-up query.

    Returns:
        Seconds taken by each run and the bodies decoded during the last run.
    """

    query(nodes[0], cursor)
    run_times = []
    for run in range(runs):
        cursor.reset_counters()
        start = time.perf_counter()
        for node in nodes:
            query(node, cursor)
        run_times.append(time.perf_counter() - start)
        logger.debug('Run %d: %.6f s', run + 1, run_times[-1])
    return run_times, cursor.bodies_decoded


def _compress(config: BenchConfig, graph: AdjacencyGraph, param1: int, param2: Optional[int]) -> CompressedGraph:
    if config.method == 'lm':
        return LmGraph.compress(graph, param1)
    return StripeGraph.compress(graph, param1, param2)


def run_bench(config: BenchConfig, graph: Optional[AdjacencyGraph] = None) -> List[BenchRecord]:
    """Benchmark every point of the configured grid.

    Args:
        config (:obj:`BenchConfig`): What to measure.
        graph (:obj:`AdjacencyGraph`, optional): Graph to use instead of reading `config.input_path`.

    Raises:
        GraphValidationError: If the graph is empty.
        UndefinedRatioError: If the graph has no links.
    """

    if graph is None:
        with open(config.input_path, 'rb') as f:
            graph = parse_text_graph(f)
    if not graph.n:
        raise GraphValidationError('cannot benchmark an empty graph')
    if not graph.links:
        raise UndefinedRatioError('bits per link undefined for a graph without links')
    if config.method == 'lm' and config.mode == 'pred':
        graph = transpose(graph)
    nodes = sample_nodes(graph.n, config.samples, config.seed)
    runs = config.effective_runs

    records = []
    for param1, param2 in config.points():
        compressed = _compress(config, graph, param1, param2)
        if config.method == 'lm':
            label = 'lm'
            bits_per_link = 8 * compressed.file_size() / graph.links
        else:
            label = '2d-stripes' if param2 else '2d-nostripes'
            bits_per_link = compressed.stats().bits_per_link
        query = compressed.predecessors if config.method == '2d' and config.mode == 'pred' else compressed.successors
        run_times, decoded = time_queries(query, nodes, runs, compressed.new_cursor())
        record = BenchRecord(label, param1, param2, bits_per_link, run_times, config.samples, config.seed, decoded)
        logger.info('%s %s %s: %.3f bits/link, mean %.3f us, min %.3f us, %d bodies decoded per run',
                    label, param1, '' if param2 is None else param2, bits_per_link, record.mean_us, record.min_us,
                    decoded)
        records.append(record)
    return records


def write_csv(records: Sequence[BenchRecord], sink: TextIO):
    """Write `records` with the fixed CSV header."""

    writer = csv.DictWriter(sink, fieldnames=CSV_FIELDS, lineterminator='\n')
    writer.writeheader()
    for record in records:
        writer.writerow(record.as_row())


__all__ = (
    'METHODS',
    'MODES',
    'DEFAULT_SAMPLES',
    'DEFAULT_RUNS',
    'CSV_FIELDS',
    'TIMING_FIELDS',
    'BenchConfig',
    'BenchRecord',
    'sample_nodes',
    'time_queries',
    'run_bench',
    'write_csv',
)
