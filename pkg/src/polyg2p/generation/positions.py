"""Two-axis position ids for span infilling.

Every token gets a pair of ids: the first is its position in the input
sequence, with answer tokens pinned to the masked slot's position; the
second counts 1..span_len inside the answer span and is 0 everywhere else.
Because the second axis is open-ended, the answer length never has to be
known when the input is encoded.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidIndex


@dataclass(frozen=True)
class PositionPair:
    pos1: int
    pos2: int


def encode_positions(context_len: int, mask_index: int, span_len: int) -> list[PositionPair]:
    """Positions for ``context_len`` context tokens followed by a span.

    Context token i gets (i, 0); answer token j (0-based inside the span)
    gets (mask_index, j+1).
    """
    if context_len < 1:
        raise InvalidIndex(f"context_len must be >= 1, got {context_len}")
    if not 0 <= mask_index < context_len:
        raise InvalidIndex(f"mask_index {mask_index} outside context of length {context_len}")
    if span_len < 1:
        raise InvalidIndex(f"span_len must be >= 1, got {span_len}")
    pairs = [PositionPair(i, 0) for i in range(context_len)]
    pairs.extend(PositionPair(mask_index, j + 1) for j in range(span_len))
    return pairs
