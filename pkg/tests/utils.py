"""Utility functions for unit test."""

import io
from typing import Iterable, List

from webtiles.core.generator import generate_graph
from webtiles.core.graph import AdjacencyGraph

G4_LISTS = [[1, 2], [2], [], [0, 3]]
G4_TEXT = b'1 2 \n2 \n\n0 3 \n'


def g4() -> AdjacencyGraph:
    """The 4-node example graph used throughout the tests."""

    return AdjacencyGraph(G4_LISTS)


def random_graph(seed: int, n: int = 300, avg_deg: float = 6.0, copy_prob: float = 0.5) -> AdjacencyGraph:
    """Seeded web-like graph small enough for pure Python round trips."""

    return generate_graph(n, avg_deg, copy_prob, seed)


def text_of(lists: Iterable[Iterable[int]]) -> bytes:
    """Canonical text form of `lists`."""

    return b''.join(b''.join(b'%d ' % successor for successor in successors) + b'\n' for successors in lists)


def save_bytes(graph) -> bytes:
    """Serialize a compressed graph to bytes."""

    sink = io.BytesIO()
    graph.save(sink)
    return sink.getvalue()


def get_fake_perf_counter(step: float, start: float = 0.0):
    """Generate monkey patch module for `time`, whose perf_counter() advances by `step` on every call."""

    ticks: List[float] = [start]

    class FakeTime:
        """Fake time module."""

        @staticmethod
        def perf_counter():
            """Return the current tick and advance the clock."""
            value = ticks[0]
            ticks[0] += step
            return value

    return FakeTime


__all__ = (
    'G4_LISTS',
    'G4_TEXT',
    'g4',
    'random_graph',
    'text_of',
    'save_bytes',
    'get_fake_perf_counter',
)
