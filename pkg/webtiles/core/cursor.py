"""Per-query scratch state."""

from typing import List

import attr


@attr.s(auto_attribs=True)
class QueryCursor:
    # noinspection PyUnresolvedReferences
    """Scratch state owned by one in-flight query at a time.

    Compressed graphs are immutable, so any number of threads may query one graph concurrently as long as each
    thread uses its own cursor.

    Attributes:
        scratch_size (int): Upper bound of any inflated block the cursor will be asked to hold.
        output (:obj:`list` of int): Result ids of the last query.
        bodies_decoded (int): Tile bodies or LM chunks decoded since the last `reset_counters()`.
        tiles_skipped (int): Tiles whose stripe bit allowed skipping the body.
        inflations (int): DEFLATE streams inflated.
    """

    scratch_size: int = 0
    output: List[int] = attr.Factory(list)
    bodies_decoded: int = 0
    tiles_skipped: int = 0
    inflations: int = 0

    def begin(self) -> List[int]:
        """Clear and return the output list for a new query."""

        self.output.clear()
        return self.output

    def reset_counters(self):
        """Zero the work counters."""

        self.bodies_decoded = 0
        self.tiles_skipped = 0
        self.inflations = 0


__all__ = (
    'QueryCursor',
)
