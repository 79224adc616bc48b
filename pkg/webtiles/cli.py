"""Command-line front end.

Exit codes: 0 on success, 1 on a runtime error (bad or corrupt files, capacity limits, I/O), 2 on a usage error.
"""

import argparse
import logging
import os
import sys
import time
from typing import BinaryIO, List, Optional, Union

import attr

from . import __version__
from .bench import DEFAULT_SAMPLES, BenchConfig, run_bench, write_csv
from .core.base import is_power_of_two
from .core.binary import sniff_magic
from .core.exceptions import FormatError, ParameterError, WebTilesError
from .core.generator import generate_graph
from .core.graph import (
    DEFAULT_BUFFER_SIZE,
    count_text_lines,
    iter_text_lists,
    parse_text_graph,
    transpose,
    write_text_graph,
    write_text_lists,
)
from .core.lm import BENCHMARK_HS, DEFAULT_H, LmGraph
from .core.lm import MAGIC as LM_MAGIC
from .core.stripes import BENCHMARK_STRIPES, BENCHMARK_TILES, DEFAULT_STRIPES, DEFAULT_TILE, StripeGraph
from .core.stripes import MAGIC as S2D_MAGIC
from .plot import plot_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def load_compressed(source: BinaryIO) -> Union[LmGraph, StripeGraph]:
    """Load an ``.lmg`` or ``.s2d`` file, recognised by its magic.

    Raises:
        FormatError: If the magic is unknown or the file is malformed.
    """

    magic = sniff_magic(source)
    if magic == LM_MAGIC:
        return LmGraph.load(source)
    if magic == S2D_MAGIC:
        return StripeGraph.load(source)
    raise FormatError(f'unknown file magic {magic!r}')


def _require_power_of_two(flag: str, value: int, allow_zero: bool = False):
    if not (is_power_of_two(value) or (allow_zero and value == 0)):
        raise ParameterError(f'{flag} should be a power of two{" or 0" if allow_zero else ""}, got {value}')


def cmd_compress(args: argparse.Namespace) -> int:
    if args.method == 'lm':
        _require_power_of_two('--h', args.h)
    else:
        _require_power_of_two('--tile', args.tile)
        _require_power_of_two('--stripes', args.stripes, allow_zero=True)
    with open(args.input, 'rb') as f:
        n = count_text_lines(f, args.buffer_size)
        f.seek(0)
        start = time.perf_counter()
        lines = iter_text_lists(f, args.buffer_size)
        if args.method == 'lm':
            graph = LmGraph.compress_lines(lines, n, args.h)
        else:
            graph = StripeGraph.compress_lines(lines, n, args.tile, args.stripes)
        seconds = time.perf_counter() - start
    with open(args.output, 'wb') as f:
        graph.save(f)

    size = graph.file_size()
    megabytes = os.path.getsize(args.input) / 1e6
    bits = f'{8 * size / graph.links:.4f}' if graph.links else 'undefined'
    print(f'nodes: {graph.n}')
    print(f'links: {graph.links}')
    print(f'bytes: {size}')
    print(f'bits/link: {bits}')
    print(f'seconds: {seconds:.3f}')
    print(f'MB/s: {megabytes / seconds if seconds else 0.0:.2f}')
    logger.info('Compressed %s into %s: %d bytes, %s bits/link in %.3f s', args.input, args.output, size, bits, seconds)
    return EXIT_OK


def cmd_decompress(args: argparse.Namespace) -> int:
    with open(args.input, 'rb') as f:
        graph = load_compressed(f)
    with open(args.output, 'wb') as f:
        count = write_text_lists(graph.iter_lists(), f)
    logger.info('Decompressed %d lists from %s into %s', count, args.input, args.output)
    return EXIT_OK


def cmd_query(args: argparse.Namespace) -> int:
    with open(args.input, 'rb') as f:
        graph = load_compressed(f)
    if args.mode == 'pred':
        result = graph.predecessors(args.node)
    else:
        result = graph.successors(args.node)
    print(' '.join(str(node) for node in result))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    config = BenchConfig(
        input_path=args.input,
        method=args.method,
        h_values=args.h,
        tile_values=args.tile,
        stripe_values=args.stripes,
        samples=args.samples,
        runs=args.runs,
        seed=args.seed,
        mode=args.mode,
    )
    records = run_bench(config)
    if args.csv:
        with open(args.csv, 'wt', encoding='utf-8', newline='') as f:
            write_csv(records, f)
    else:
        write_csv(records, sys.stdout)
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    with open(args.input, 'rt', encoding='utf-8', newline='') as source:
        with open(args.output, 'wt', encoding='utf-8') as sink:
            count = plot_csv(source, sink, args.title)
    logger.info('Wrote %d points to %s', count, args.output)
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    graph = generate_graph(args.nodes, args.avg_deg, args.copy_prob, args.seed, args.locality)
    with open(args.output, 'wb') as f:
        write_text_graph(graph, f)
    logger.info('Generated %d nodes, %d links into %s', graph.n, graph.links, args.output)
    return EXIT_OK


def cmd_transpose(args: argparse.Namespace) -> int:
    with open(args.input, 'rb') as f:
        graph = parse_text_graph(f, args.buffer_size)
    with open(args.output, 'wb') as f:
        write_text_graph(transpose(graph), f)
    logger.info('Transposed %d nodes, %d links into %s', graph.n, graph.links, args.output)
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    with open(args.input, 'rb') as f:
        graph = load_compressed(f)
    stats = graph.stats()
    print(f'format: {"lmg" if isinstance(graph, LmGraph) else "s2d"}')
    print(f'nodes: {graph.n}')
    for key, value in sorted(attr.asdict(stats).items()):
        print(f'{key}: {value}')
    print(f'bits/link: {stats.bits_per_link:.4f}' if stats.links else 'bits/link: undefined')
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Returns the argument parser with one subcommand per operation."""

    parser = argparse.ArgumentParser(prog='webtiles', description='Compressed web graphs with random access.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='log debug messages')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='log warnings and errors only')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND', required=True)

    command = commands.add_parser('compress', help='compress a text graph into .lmg or .s2d')
    command.add_argument('--method', choices=('lm', '2d'), default='2d')
    command.add_argument('--input', required=True, help='text graph')
    command.add_argument('--output', required=True, help='compressed file')
    command.add_argument('--h', type=int, default=DEFAULT_H, help='LM chunk height')
    command.add_argument('--tile', type=int, default=DEFAULT_TILE, help='2D tile size')
    command.add_argument('--stripes', type=int, default=DEFAULT_STRIPES, help='2D stripe count, 0 for none')
    command.add_argument('--buffer-size', type=int, default=DEFAULT_BUFFER_SIZE, help='text read buffer in bytes')
    command.set_defaults(handler=cmd_compress)

    command = commands.add_parser('decompress', help='write a compressed file back as a text graph')
    command.add_argument('--input', required=True, help='.lmg or .s2d file')
    command.add_argument('--output', required=True, help='text graph')
    command.set_defaults(handler=cmd_decompress)

    command = commands.add_parser('query', help='print the successors or predecessors of one node')
    command.add_argument('--input', required=True, help='.lmg or .s2d file')
    command.add_argument('--node', type=int, required=True)
    command.add_argument('--mode', choices=('succ', 'pred'), default='succ')
    command.set_defaults(handler=cmd_query)

    command = commands.add_parser('bench', help='measure bits per link and random access time')
    command.add_argument('--method', choices=('lm', '2d'), default='2d')
    command.add_argument('--input', required=True, help='text graph')
    command.add_argument('--h', type=int, nargs='+', default=list(BENCHMARK_HS), help='LM chunk heights')
    command.add_argument('--tile', type=int, nargs='+', default=list(BENCHMARK_TILES), help='2D tile sizes')
    command.add_argument('--stripes', type=int, nargs='+', default=list(BENCHMARK_STRIPES), help='2D stripe counts')
    command.add_argument('--samples', type=int, default=DEFAULT_SAMPLES)
    command.add_argument('--runs', type=int, default=None, help='defaults to 10 for lm and 4 for 2d')
    command.add_argument('--seed', type=int, default=0)
    command.add_argument('--mode', choices=('succ', 'pred'), default='succ')
    command.add_argument('--csv', help='write the CSV here instead of stdout')
    command.set_defaults(handler=cmd_bench)

    command = commands.add_parser('plot', help='render a benchmark CSV as an SVG scatter plot')
    command.add_argument('--input', required=True, help='benchmark CSV')
    command.add_argument('--output', required=True, help='SVG file')
    command.add_argument('--title', default='Random access')
    command.set_defaults(handler=cmd_plot)

    command = commands.add_parser('gen', help='generate a synthetic web graph')
    command.add_argument('--nodes', type=int, required=True)
    command.add_argument('--avg-deg', type=float, required=True)
    command.add_argument('--copy-prob', type=float, required=True)
    command.add_argument('--seed', type=int, default=0)
    command.add_argument('--locality', type=float, default=0.8)
    command.add_argument('--output', required=True, help='text graph')
    command.set_defaults(handler=cmd_gen)

    command = commands.add_parser('transpose', help='write the transposed text graph')
    command.add_argument('--input', required=True, help='text graph')
    command.add_argument('--output', required=True, help='text graph')
    command.add_argument('--buffer-size', type=int, default=DEFAULT_BUFFER_SIZE, help='text read buffer in bytes')
    command.set_defaults(handler=cmd_transpose)

    command = commands.add_parser('stats', help='print size statistics of a compressed file')
    command.add_argument('--input', required=True, help='.lmg or .s2d file')
    command.set_defaults(handler=cmd_stats)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line.

    Returns:
        The exit code. Usage errors raise SystemExit with code 2, as argparse does.
    """

    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)

    try:
        return args.handler(args)
    except ParameterError as ex:
        parser.error(str(ex))
    except (WebTilesError, OSError) as ex:
        logger.error('%s: %s', ex.__class__.__name__, ex)
    return EXIT_ERROR


__all__ = (
    'EXIT_OK',
    'EXIT_ERROR',
    'EXIT_USAGE',
    'load_compressed',
    'build_parser',
    'main',
)
