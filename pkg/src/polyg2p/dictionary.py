"""Multi-level dictionary of polyphonic characters.

Each entry maps one character to its candidate readings ordered by
frequency rank, and every reading carries part-of-speech tags, short
definitions, and example phrases. The file format is line-delimited JSON
(one character per line, ``#`` comments allowed), sorted by code point in
canonical form so that save/load round-trips byte-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import SchemaError, UnknownCharacter
from .pinyin import MalformedPinyin, PinyinSyllable, parse_pinyin


@dataclass(frozen=True)
class Sense:
    """One candidate reading of a character with its semantic extensions."""

    pinyin: PinyinSyllable
    pos_tags: tuple[str, ...] = ()
    definitions: tuple[str, ...] = ()
    phrases: tuple[str, ...] = ()
    freq_rank: int = 0


@dataclass(frozen=True)
class CharacterEntry:
    """A polyphonic character and its senses, most frequent first."""

    character: str
    senses: tuple[Sense, ...]

    def candidate_pinyin(self) -> list[PinyinSyllable]:
        return [s.pinyin for s in self.senses]


@dataclass
class KnowledgeLimits:
    """Per-sense truncation budget applied at prompt-render time."""

    max_definitions: int = 3
    max_phrases: int = 3


@dataclass
class PolyphoneDictionary:
    """Immutable-after-load lookup table of polyphonic characters."""

    entries: dict[str, CharacterEntry] = field(default_factory=dict)
    provenance: str = ""

    @property
    def entry_count(self) -> int:
        return len(self.entries)

    def __contains__(self, character: str) -> bool:
        return character in self.entries

    def candidates(self, character: str) -> list[PinyinSyllable]:
        """Candidate readings in frequency order; empty if unknown."""
        entry = self.entries.get(character)
        if entry is None:
            return []
        return entry.candidate_pinyin()

    def knowledge_block(self, character: str, limits: KnowledgeLimits | None = None) -> str:
        """Render the character's senses as one line per candidate.

        Line layout: ``<pinyin>: <pos>; <definitions>; <phrases>`` with
        、-separated items, truncated to the limits. POS tags are always
        shown; definitions and phrases honor their budgets.
        """
        limits = limits or KnowledgeLimits()
        entry = self.entries.get(character)
        if entry is None:
            raise UnknownCharacter(character)
        lines = []
        for sense in entry.senses:
            lines.append(render_sense_line(sense, limits))
        return "\n".join(lines)


def render_sense_line(sense: Sense, limits: KnowledgeLimits) -> str:
    parts = []
    if sense.pos_tags:
        parts.append("、".join(sense.pos_tags))
    defs = sense.definitions[: max(limits.max_definitions, 0)]
    if defs:
        parts.append("、".join(defs))
    phrases = sense.phrases[: max(limits.max_phrases, 0)]
    if phrases:
        parts.append("、".join(phrases))
    if not parts:
        return sense.pinyin.text
    return f"{sense.pinyin.text}: " + "; ".join(parts)


@dataclass(frozen=True)
class RawRecord:
    """One pre-aggregation row: a single (character, reading) observation."""

    character: str
    pinyin: PinyinSyllable
    pos_tags: tuple[str, ...] = ()
    definitions: tuple[str, ...] = ()
    phrases: tuple[str, ...] = ()
    frequency_count: int = 0


def build_dictionary(raw_records: Iterable[RawRecord], provenance: str = "") -> PolyphoneDictionary:
    """Aggregate raw records into a dictionary of polyphones.

    Records are grouped by character; duplicate (character, pinyin) rows
    merge by concatenating POS tags, definitions and phrases (deduped,
    order kept) and summing frequency counts. Characters left with a single
    distinct reading are dropped, not rejected. Rank 0 is the highest
    count; ties keep first-appearance order.
    """
    grouped: dict[str, dict[str, dict]] = {}
    for rec in raw_records:
        if rec.frequency_count < 0:
            raise ValueError(f"negative frequency for {rec.character}/{rec.pinyin}")
        senses = grouped.setdefault(rec.character, {})
        slot = senses.setdefault(
            rec.pinyin.text,
            {"pinyin": rec.pinyin, "pos": [], "defs": [], "phrases": [], "count": 0},
        )
        slot["count"] += rec.frequency_count
        for bucket, values in (("pos", rec.pos_tags), ("defs", rec.definitions), ("phrases", rec.phrases)):
            for v in values:
                if v not in slot[bucket]:
                    slot[bucket].append(v)

    entries: dict[str, CharacterEntry] = {}
    for character, senses in grouped.items():
        if len(senses) < 2:
            continue
        ordered = sorted(senses.values(), key=lambda s: -s["count"])  # stable: ties keep insertion order
        built = tuple(
            Sense(
                pinyin=slot["pinyin"],
                pos_tags=tuple(slot["pos"]),
                definitions=tuple(slot["defs"]),
                phrases=tuple(slot["phrases"]),
                freq_rank=rank,
            )
            for rank, slot in enumerate(ordered)
        )
        entries[character] = CharacterEntry(character=character, senses=built)
    return PolyphoneDictionary(entries=entries, provenance=provenance)


def _sense_from_obj(obj: dict, character: str, line_no: int) -> Sense:
    try:
        pinyin = parse_pinyin(obj["pinyin"])
    except KeyError:
        raise SchemaError(line_no, "sense missing 'pinyin'")
    except MalformedPinyin as exc:
        raise SchemaError(line_no, f"bad pinyin: {exc}")
    phrases = tuple(obj.get("phrases", []))
    for phrase in phrases:
        if character not in phrase:
            raise SchemaError(line_no, f"phrase {phrase!r} does not contain {character!r}")
    return Sense(
        pinyin=pinyin,
        pos_tags=tuple(obj.get("pos", [])),
        definitions=tuple(obj.get("defs", [])),
        phrases=phrases,
        freq_rank=int(obj.get("freq_rank", 0)),
    )


def load_dictionary(path: str) -> PolyphoneDictionary:
    """Load a line-delimited dictionary file, validating every invariant.

    Rejected with SchemaError(line, reason): duplicate characters, fewer
    than two senses, duplicate pinyin within an entry, freq_rank values
    that are not exactly 0..k-1, phrases not containing the character.
    """
    entries: dict[str, CharacterEntry] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(line_no, f"invalid JSON: {exc}")
            character = obj.get("char")
            if not isinstance(character, str) or len(character) != 1:
                raise SchemaError(line_no, f"'char' must be a single character, got {character!r}")
            if character in entries:
                raise SchemaError(line_no, f"duplicate character {character!r}")
            raw_senses = obj.get("senses")
            if not isinstance(raw_senses, list) or len(raw_senses) < 2:
                raise SchemaError(line_no, f"{character!r} needs at least 2 senses")
            senses = [_sense_from_obj(s, character, line_no) for s in raw_senses]
            senses.sort(key=lambda s: s.freq_rank)
            ranks = [s.freq_rank for s in senses]
            if ranks != list(range(len(senses))):
                raise SchemaError(line_no, f"freq_rank values {ranks} are not contiguous from 0")
            texts = [s.pinyin.text for s in senses]
            if len(set(texts)) != len(texts):
                raise SchemaError(line_no, f"duplicate pinyin in entry {character!r}")
            entries[character] = CharacterEntry(character=character, senses=tuple(senses))
    return PolyphoneDictionary(entries=entries, provenance=path)


def _entry_to_obj(entry: CharacterEntry) -> dict:
    return {
        "char": entry.character,
        "senses": [
            {
                "pinyin": s.pinyin.text,
                "pos": list(s.pos_tags),
                "defs": list(s.definitions),
                "phrases": list(s.phrases),
                "freq_rank": s.freq_rank,
            }
            for s in entry.senses
        ],
    }


def save_dictionary(dictionary: PolyphoneDictionary, path: str) -> None:
    """Write canonical form: entries sorted by code point, senses by rank."""
    with open(path, "w", encoding="utf-8") as fh:
        for character in sorted(dictionary.entries):
            obj = _entry_to_obj(dictionary.entries[character])
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(", ", ": ")))
            fh.write("\n")


def load_raw_records(path: str) -> list[RawRecord]:
    """Read pre-aggregation records from a TSV file.

    Columns: character, pinyin, frequency count, then optional
    、-separated POS tags, definitions and phrases. ``#`` lines are
    comments.
    """

    def split_list(cell: str) -> tuple[str, ...]:
        return tuple(x for x in cell.split("、") if x) if cell else ()

    records: list[RawRecord] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) < 2:
                raise SchemaError(line_no, "need at least character and pinyin columns")
            character = cols[0].strip()
            if len(character) != 1:
                raise SchemaError(line_no, f"first column must be one character, got {character!r}")
            try:
                pinyin = parse_pinyin(cols[1].strip())
            except MalformedPinyin as exc:
                raise SchemaError(line_no, str(exc))
            try:
                count = int(cols[2]) if len(cols) > 2 and cols[2].strip() else 0
            except ValueError:
                raise SchemaError(line_no, f"bad frequency count {cols[2]!r}")
            if count < 0:
                raise SchemaError(line_no, f"negative frequency count {count}")
            records.append(
                RawRecord(
                    character=character,
                    pinyin=pinyin,
                    pos_tags=split_list(cols[3]) if len(cols) > 3 else (),
                    definitions=split_list(cols[4]) if len(cols) > 4 else (),
                    phrases=split_list(cols[5]) if len(cols) > 5 else (),
                    frequency_count=count,
                )
            )
    return records


def candidate_count_histogram(dictionary: PolyphoneDictionary) -> dict[int, int]:
    """How many entries have 2, 3, ... candidate readings."""
    histogram: dict[int, int] = {}
    for entry in dictionary.entries.values():
        n = len(entry.senses)
        histogram[n] = histogram.get(n, 0) + 1
    return dict(sorted(histogram.items()))
