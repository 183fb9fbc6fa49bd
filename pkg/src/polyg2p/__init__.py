"""Knowledge-augmented Mandarin polyphone disambiguation toolkit."""

from .pinyin import PinyinSyllable, edit_distance, parse_pinyin
from .dictionary import (
    CharacterEntry,
    KnowledgeLimits,
    PolyphoneDictionary,
    RawRecord,
    Sense,
    build_dictionary,
    load_dictionary,
    save_dictionary,
)
from .prompting import (
    Prompt,
    PromptStyle,
    Sample,
    Style,
    TemplateCatalog,
    build_prompt,
    default_catalog,
    load_catalog,
    mark_target,
)
from .postprocess import CorrectionOutcome, correct, extract_answer
from .pipeline import PipelineResult, PolyphonePipeline

__version__ = "0.1.0"

__all__ = [
    "PinyinSyllable",
    "parse_pinyin",
    "edit_distance",
    "Sense",
    "CharacterEntry",
    "PolyphoneDictionary",
    "KnowledgeLimits",
    "RawRecord",
    "build_dictionary",
    "load_dictionary",
    "save_dictionary",
    "Sample",
    "Style",
    "PromptStyle",
    "Prompt",
    "TemplateCatalog",
    "mark_target",
    "build_prompt",
    "default_catalog",
    "load_catalog",
    "extract_answer",
    "correct",
    "CorrectionOutcome",
    "PolyphonePipeline",
    "PipelineResult",
    "__version__",
]
