"""Deterministic synthetic web graphs.

Randomness comes from :class:`XorShift64Star`, fully specified here so that a seed yields the same graph on every
platform and Python version:

    state ^= state >> 12
    state ^= state << 25   (mod 2^64)
    state ^= state >> 27
    output = state * 0x2545F4914F6CDD1D   (mod 2^64)

The 64-bit seed is first passed through one SplitMix64 step (increment ``0x9E3779B97F4A7C15``, multipliers
``0xBF58476D1CE4E5B9`` and ``0x94D049BB133111EB``) so that small or zero seeds still give a non-zero state.
"""

import logging
from typing import List

from .exceptions import ParameterError
from .graph import AdjacencyGraph, normalize_list

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1


def splitmix64(seed: int) -> int:
    """Returns one SplitMix64 output for `seed`."""

    z = (seed + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    """xorshift64* generator.

    Args:
        seed (int): Any integer; reduced modulo 2^64 and scrambled with SplitMix64.
    """

    def __init__(self, seed: int):
        self._state = splitmix64(seed & _MASK64) or 1

    def __repr__(self):
        return f'{self.__class__.__name__}(state={self._state:#018x})'

    def next_u64(self) -> int:
        """Returns the next 64-bit output."""

        state = self._state
        state ^= state >> 12
        state ^= (state << 25) & _MASK64
        state ^= state >> 27
        self._state = state
        return (state * 0x2545F4914F6CDD1D) & _MASK64

    def next_below(self, bound: int) -> int:
        """Returns an integer in [0, bound) by multiply-shift reduction."""

        return (self.next_u64() * bound) >> 64

    def next_float(self) -> float:
        """Returns a float in [0, 1) built from the top 53 bits."""

        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


def _fresh_list(rng: XorShift64Star, node: int, n: int, avg_deg: float, locality: float) -> List[int]:
    degree = min(n, rng.next_below(int(2 * avg_deg) + 1))
    window = max(1, int(4 * avg_deg))
    successors = []
    for _ in range(degree):
        if rng.next_float() < locality:
            target = (node + rng.next_below(2 * window + 1) - window) % n
        else:
            target = rng.next_below(n)
        successors.append(target)
    return successors


def _copied_list(rng: XorShift64Star, previous: List[int], node: int, n: int, avg_deg: float) -> List[int]:
    successors = [target for target in previous if rng.next_below(8) != 0]
    window = max(1, int(4 * avg_deg))
    for _ in range(rng.next_below(max(1, len(previous) // 4) + 1)):
        successors.append((node + rng.next_below(2 * window + 1) - window) % n)
    return successors


def generate_graph(n: int, avg_deg: float, copy_prob: float, seed: int, locality: float = 0.8) -> AdjacencyGraph:
    """Generate a web-like graph with copied neighbourhoods and link locality.

    With probability `copy_prob` node `i` copies the list of node `i - 1`, dropping each member with probability
    1/8 and adding a few successors near `i`. Otherwise it draws about `avg_deg` fresh successors, each one from the
    window around `i` with probability `locality` and uniformly from all nodes otherwise.

    Args:
        n (int): Number of nodes.
        avg_deg (float): Expected out-degree of a fresh list.
        copy_prob (float): Probability of copying the previous list.
        seed (int): Seed of the xorshift64* generator.
        locality (float): Probability that a fresh successor is local.

    Raises:
        ParameterError: If `n` is negative, `avg_deg` is not positive or a probability is outside [0, 1].
    """

    if n < 0:
        raise ParameterError(f'`n` should be greater or equal to 0, got {n}')
    if not avg_deg > 0:
        raise ParameterError(f'`avg_deg` should be greater than 0, got {avg_deg}')
    for name, value in (('copy_prob', copy_prob), ('locality', locality)):
        if not 0.0 <= value <= 1.0:
            raise ParameterError(f'`{name}` should be within [0, 1], got {value}')

    rng = XorShift64Star(seed)
    lists: List[List[int]] = []
    previous: List[int] = []
    for node in range(n):
        if node and rng.next_float() < copy_prob:
            successors = _copied_list(rng, previous, node, n, avg_deg)
        else:
            successors = _fresh_list(rng, node, n, avg_deg, locality)
        previous = normalize_list(successors)
        lists.append(previous)
    graph = AdjacencyGraph(lists)
    logger.debug('Generated graph with %d nodes and %d links (seed %d)', n, graph.links, seed)
    return graph


__all__ = (
    'splitmix64',
    'XorShift64Star',
    'generate_graph',
)
