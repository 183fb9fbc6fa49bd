"""End-to-end prediction: mark -> prompt -> generate -> correct."""

from __future__ import annotations

from dataclasses import dataclass

from .dictionary import KnowledgeLimits, PolyphoneDictionary
from .evaluation import Prediction
from .generation.base import GenerationBackend, GenerationRequest
from .pinyin import PinyinSyllable, parse_pinyin
from .postprocess import CorrectionOutcome, correct, extract_answer
from .prompting import Prompt, PromptStyle, Sample, TemplateCatalog, build_prompt


@dataclass
class PipelineResult:
    final_pinyin: PinyinSyllable
    outcome: CorrectionOutcome | None  # None when no candidates were available
    raw_text: str
    prompt: Prompt

    @property
    def provenance(self) -> str:
        if self.outcome is None:
            return "uncorrected"
        return "valid" if self.outcome.was_valid else "corrected"


class PolyphonePipeline:
    """Ties the dictionary, prompt renderer, backend and correction together.

    Characters without a dictionary entry can only go through the
    completion style; their raw output is parsed as-is since there is no
    candidate space to project onto.
    """

    def __init__(
        self,
        dictionary: PolyphoneDictionary,
        backend: GenerationBackend,
        style: PromptStyle | None = None,
        limits: KnowledgeLimits | None = None,
        catalog: TemplateCatalog | None = None,
        max_new_tokens: int = 8,
        greedy: bool = True,
    ):
        self.dictionary = dictionary
        self.backend = backend
        self.style = style or PromptStyle()
        self.limits = limits or KnowledgeLimits()
        self.catalog = catalog
        self.max_new_tokens = max_new_tokens
        self.greedy = greedy

    @property
    def predictor_id(self) -> str:
        return f"pipeline[{self.style.label}]@{self.backend.backend_id}"

    def predict(self, sample: Sample) -> PipelineResult:
        prompt = build_prompt(sample, self.dictionary, self.style, self.limits, self.catalog)
        raw = self.backend.generate(
            GenerationRequest(prompt_text=prompt.text, max_new_tokens=self.max_new_tokens, greedy=self.greedy)
        )
        candidates = self.dictionary.candidates(sample.target_char)
        if candidates:
            outcome = correct(raw, candidates)
            return PipelineResult(final_pinyin=outcome.final_pinyin, outcome=outcome, raw_text=raw, prompt=prompt)
        final = parse_pinyin(extract_answer(raw))
        return PipelineResult(final_pinyin=final, outcome=None, raw_text=raw, prompt=prompt)

    def __call__(self, sample: Sample) -> Prediction:
        result = self.predict(sample)
        was_valid = result.outcome.was_valid if result.outcome is not None else None
        return Prediction(pinyin=result.final_pinyin, was_valid=was_valid)
