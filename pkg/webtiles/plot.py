"""SVG scatter plots of benchmark CSV files: bits per link (x) against mean query time (y)."""

import csv
import io
import logging
from typing import Dict, List, Sequence, TextIO, Tuple

import attr
import matplotlib.pyplot as plt
from matplotlib.figure import Figure

from .bench import CSV_FIELDS
from .core.exceptions import FormatError

logger = logging.getLogger(__name__)

FIGSIZE = (10, 7)
AXIS_MARGIN = 0.05
POINT_GID = 'point-{}'
# Keep text as <text> elements so labels stay searchable in the SVG.
SVG_STYLE = {'svg.fonttype': 'none', 'svg.hashsalt': 'webtiles'}


@attr.s(auto_attribs=True, frozen=True)
class PlotPoint:
    # noinspection PyUnresolvedReferences
    """One benchmark record reduced to what the plot shows.

    Attributes:
        method (str): Series name.
        label (str): Parameter label, ``h=16`` or ``B=1024 K=8``.
        bits_per_link (float): X value.
        mean_us (float): Y value.
    """

    method: str
    label: str
    bits_per_link: float
    mean_us: float


def _label(row: Dict[str, str]) -> str:
    if row['method'] == 'lm':
        return f'h={row["param1"]}'
    if row['param2'] not in ('', '0'):
        return f'B={row["param1"]} K={row["param2"]}'
    return f'B={row["param1"]}'


def read_points(source: TextIO) -> List[PlotPoint]:
    """Read the records of a benchmark CSV.

    Raises:
        FormatError: If the header misses a column, a value is not a number or there are no records.
    """

    reader = csv.DictReader(source)
    missing = [field for field in CSV_FIELDS if field not in (reader.fieldnames or ())]
    if missing:
        raise FormatError(f'csv: missing columns {", ".join(missing)}')
    points = []
    for row in reader:
        try:
            points.append(PlotPoint(row['method'], _label(row), float(row['bits_per_link']), float(row['mean_us'])))
        except (TypeError, ValueError) as ex:
            raise FormatError(f'csv: malformed record on line {reader.line_num}') from ex
    if not points:
        raise FormatError('csv: no records')
    return points


def axis_range(values: Sequence[float]) -> Tuple[float, float]:
    """Returns ``(low, high)`` covering `values` with a 5% margin on both sides.

    A single distinct value gets a margin of 5% of its magnitude, or 1 around 0.
    """

    low, high = min(values), max(values)
    span = high - low
    if not span:
        span = abs(low) or 20.0
    return low - AXIS_MARGIN * span, high + AXIS_MARGIN * span


def build_figure(points: Sequence[PlotPoint], title: str = 'Random access') -> Figure:
    """Returns the scatter figure of `points`, one colour and legend entry per method.

    Every point is its own collection with gid ``point-<i>``, `i` being its record index.
    """

    fig, ax = plt.subplots(figsize=FIGSIZE)
    colors = {}
    for i, point in enumerate(points):
        first = point.method not in colors
        if first:
            colors[point.method] = f'C{len(colors) % 10}'
        ax.scatter(
            [point.bits_per_link], [point.mean_us],
            color=colors[point.method],
            label=point.method if first else '_nolegend_',
            gid=POINT_GID.format(i),
            zorder=3,
        )
        ax.annotate(point.label, (point.bits_per_link, point.mean_us), xytext=(5, 5), textcoords='offset points',
                    fontsize=8)

    ax.set_xlim(*axis_range([point.bits_per_link for point in points]))
    ax.set_ylim(*axis_range([point.mean_us for point in points]))
    ax.set_title(title)
    ax.set_xlabel('bits per link')
    ax.set_ylabel('mean time per query (us)')
    ax.grid(zorder=1, linestyle='--', alpha=0.6)
    ax.legend(loc='upper right')
    fig.tight_layout()
    return fig


def render_svg(points: Sequence[PlotPoint], title: str = 'Random access') -> str:
    """Returns the figure of `points` as a standalone SVG document."""

    fig = build_figure(points, title)
    sink = io.StringIO()
    try:
        with plt.rc_context(SVG_STYLE):
            fig.savefig(sink, format='svg', metadata={'Date': None})
    finally:
        plt.close(fig)
    return sink.getvalue()


def plot_csv(source: TextIO, sink: TextIO, title: str = 'Random access') -> int:
    """Render the CSV read from `source` as SVG into `sink`.

    Returns:
        The number of plotted points.

    Raises:
        FormatError: If the CSV is malformed or empty.
    """

    points = read_points(source)
    sink.write(render_svg(points, title))
    logger.debug('Plotted %d points in %d series', len(points), len({point.method for point in points}))
    return len(points)


__all__ = (
    'PlotPoint',
    'read_points',
    'axis_range',
    'build_figure',
    'render_svg',
    'plot_csv',
)
