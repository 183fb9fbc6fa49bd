"""Projection of raw generated text onto the valid candidate space.

Generation can produce anything; this module guarantees the final answer
is one of the target character's candidate readings. Exact matches pass
through untouched, everything else snaps to the candidate with the lowest
edit distance, ties going to the more frequent (earlier) candidate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyCandidateList
from .pinyin import PinyinSyllable, edit_distance

_ANSWER_RE = re.compile(r"[a-z]+[1-5]")


@dataclass(frozen=True)
class CorrectionOutcome:
    final_pinyin: PinyinSyllable
    was_valid: bool
    distance: int
    tie_broken: bool


def extract_answer(generated: str) -> str:
    """Pull the pinyin-shaped token out of the generated text.

    Returns the first maximal ``[a-z]+[1-5]`` substring; if there is none,
    the text stripped of surrounding whitespace and punctuation comes back
    unchanged so the distance-based correction can still work on it.
    """
    m = _ANSWER_RE.search(generated)
    if m:
        return m.group(0)
    stripped = generated.strip()
    while stripped and not (stripped[0].isalnum() or "一" <= stripped[0] <= "鿿"):
        stripped = stripped[1:]
    while stripped and not (stripped[-1].isalnum() or "一" <= stripped[-1] <= "鿿"):
        stripped = stripped[:-1]
    return stripped


def correct(generated: str, candidates: Sequence[PinyinSyllable]) -> CorrectionOutcome:
    """Snap the generated text onto the candidate list.

    The candidate list must be non-empty and sorted by frequency. The
    result is always a member of the list.
    """
    if not candidates:
        raise EmptyCandidateList("no candidate readings to project onto")
    answer = extract_answer(generated)
    for candidate in candidates:
        if answer == candidate.text:
            return CorrectionOutcome(final_pinyin=candidate, was_valid=True, distance=0, tie_broken=False)
    distances = [edit_distance(answer, c.text) for c in candidates]
    best = min(distances)
    winner = distances.index(best)
    return CorrectionOutcome(
        final_pinyin=candidates[winner],
        was_valid=False,
        distance=best,
        tie_broken=distances.count(best) > 1,
    )
