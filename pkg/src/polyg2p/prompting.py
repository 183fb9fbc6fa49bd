"""Prompt rendering: sentence + optional dictionary knowledge -> model input.

Two styles are supported. Completion asks for the pinyin of the marked
character outright; multiple-choice additionally enumerates the candidate
readings in frequency order. Either style can append the per-candidate
knowledge block. Rendering is a pure function of its inputs so prompts are
byte-stable across runs and platforms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

from .dictionary import KnowledgeLimits, PolyphoneDictionary
from .errors import IndexOutOfRange, UnknownCharacter
from .pinyin import PinyinSyllable

# The CPP corpus marks the target with U+2582 LOWER THREE EIGHTHS BLOCK.
TARGET_MARK = "▂"

KNOWLEDGE_LABEL = "解释："  # jie3shi4: explanations


class Style(str, Enum):
    COMPLETION = "completion"
    MULTIPLE_CHOICE = "choice"


@dataclass(frozen=True)
class PromptStyle:
    """Prompt format selector: base style plus the knowledge switch."""

    style: Style = Style.MULTIPLE_CHOICE
    include_knowledge: bool = True

    @property
    def label(self) -> str:
        suffix = "+knowledge" if self.include_knowledge else ""
        return f"{self.style.value}{suffix}"


@dataclass(frozen=True)
class Sample:
    """A sentence with one polyphonic character singled out."""

    sentence: str
    target_index: int
    target_char: str
    gold_pinyin: PinyinSyllable | None = None

    @classmethod
    def at(cls, sentence: str, target_index: int, gold_pinyin: PinyinSyllable | None = None) -> "Sample":
        if not 0 <= target_index < len(sentence):
            raise IndexOutOfRange(f"index {target_index} outside sentence of length {len(sentence)}")
        return cls(
            sentence=sentence,
            target_index=target_index,
            target_char=sentence[target_index],
            gold_pinyin=gold_pinyin,
        )


@dataclass(frozen=True)
class Prompt:
    """A rendered prompt plus the metadata needed to undo/score it."""

    text: str
    style: PromptStyle
    candidate_order: tuple[PinyinSyllable, ...]
    marked_sentence: str


def mark_target(sample: Sample) -> str:
    """Wrap the target character in the two U+2582 marker symbols."""
    if not 0 <= sample.target_index < len(sample.sentence):
        raise IndexOutOfRange(
            f"index {sample.target_index} outside sentence of length {len(sample.sentence)}"
        )
    i = sample.target_index
    return f"{sample.sentence[:i]}{TARGET_MARK}{sample.sentence[i]}{TARGET_MARK}{sample.sentence[i + 1:]}"


_HEADER_RE = re.compile(r"^\[([A-Za-z0-9_]+)\]\s*$")


@dataclass
class TemplateCatalog:
    """Named prompt templates loaded from a catalog file."""

    templates: dict[str, str] = field(default_factory=dict)
    source: str = ""

    def body(self, name: str) -> str:
        try:
            return self.templates[name]
        except KeyError:
            raise KeyError(f"template {name!r} not in catalog {self.source or '<builtin>'}")


def parse_catalog(text: str, source: str = "") -> TemplateCatalog:
    """Parse ``[name]``-sectioned templates; # lines are comments."""
    templates: dict[str, str] = {}
    name: str | None = None
    body_lines: list[str] = []

    def flush():
        if name is not None:
            body = "\n".join(body_lines)
            templates[name] = body.strip("\n")

    for line in text.splitlines():
        if line.lstrip().startswith("#"):
            continue
        header = _HEADER_RE.match(line)
        if header:
            flush()
            name = header.group(1)
            body_lines = []
        elif name is not None:
            body_lines.append(line)
    flush()
    return TemplateCatalog(templates=templates, source=source)


def load_catalog(path: str | Path) -> TemplateCatalog:
    return parse_catalog(Path(path).read_text(encoding="utf-8"), source=str(path))


def default_catalog() -> TemplateCatalog:
    text = resources.files("polyg2p").joinpath("templates/default.txt").read_text(encoding="utf-8")
    return parse_catalog(text, source="builtin:default")


def build_prompt(
    sample: Sample,
    dictionary: PolyphoneDictionary,
    style: PromptStyle,
    limits: KnowledgeLimits | None = None,
    catalog: TemplateCatalog | None = None,
) -> Prompt:
    """Render the prompt for one sample.

    Multiple-choice requires the target character to be in the dictionary
    (the candidates are the choices). Completion prompts degrade to a bare
    question when the character is unknown: no candidates, no knowledge.
    """
    limits = limits or KnowledgeLimits()
    catalog = catalog or default_catalog()
    marked = mark_target(sample)
    known = sample.target_char in dictionary
    candidates = dictionary.candidates(sample.target_char)

    if style.style is Style.MULTIPLE_CHOICE:
        if not known:
            raise UnknownCharacter(sample.target_char)
        template = catalog.body("choice")
    else:
        template = catalog.body("completion")

    knowledge = ""
    if style.include_knowledge and known:
        block = dictionary.knowledge_block(sample.target_char, limits)
        knowledge = f"{KNOWLEDGE_LABEL}\n{block}\n"

    text = template.format(
        sentence=marked,
        candidates="\n".join(c.text for c in candidates),
        candidates_inline="、".join(c.text for c in candidates),
        knowledge=knowledge,
    )

    presented = style.style is Style.MULTIPLE_CHOICE or (style.include_knowledge and known)
    return Prompt(
        text=text,
        style=style,
        candidate_order=tuple(candidates) if presented else (),
        marked_sentence=marked,
    )
