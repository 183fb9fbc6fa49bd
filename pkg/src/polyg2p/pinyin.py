"""Toned-pinyin parsing and string metrics.

A syllable is written as a lowercase romanized body followed by one tone
digit, e.g. ``hong2`` or ``lo5`` (5 marks the neutral tone). Legality of a
syllable as actual Mandarin is *not* checked here; the dictionary is the
source of truth for which readings exist.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import MalformedPinyin

_PINYIN_RE = re.compile(r"^([a-z]+)([1-5])$")


@dataclass(frozen=True, order=True)
class PinyinSyllable:
    """One toned syllable: romanized body plus tone digit 1-5."""

    base: str
    tone: int

    def __post_init__(self):
        if not self.base or not all("a" <= c <= "z" for c in self.base):
            raise MalformedPinyin(f"bad syllable body: {self.base!r}")
        if self.tone not in (1, 2, 3, 4, 5):
            raise MalformedPinyin(f"tone out of range: {self.tone!r}")

    @property
    def text(self) -> str:
        """Canonical written form, e.g. ``hong2``."""
        return f"{self.base}{self.tone}"

    def __str__(self) -> str:
        return self.text


def parse_pinyin(text: str) -> PinyinSyllable:
    """Parse a canonical toned syllable; raises MalformedPinyin otherwise."""
    m = _PINYIN_RE.match(text)
    if m is None:
        raise MalformedPinyin(f"not a toned pinyin syllable: {text!r}")
    return PinyinSyllable(base=m.group(1), tone=int(m.group(2)))


def format_pinyin(syllable: PinyinSyllable) -> str:
    """Inverse of parse_pinyin; round-trips bit-exactly."""
    return syllable.text


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance with unit insert/delete/substitute costs.

    Operates on Unicode scalar values, so the tone digit counts as one
    symbol just like a letter.
    """
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            current[j] = min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            )
        previous = current
    return previous[-1]
