"""Glue that turns labeled samples into a trained local backend.

Used by the CLI, the ablation runner and the tests so they all build
vocabularies, render training pairs and size the model the same way.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dictionary import KnowledgeLimits, PolyphoneDictionary, render_sense_line
from .errors import EmptyDataset
from .generation import CharTokenizer, ToyBackend, ToyGlm, ToyGlmConfig, TrainOptions, train
from .generation.training import TrainResult
from .pipeline import PolyphonePipeline
from .prompting import PromptStyle, Sample, TemplateCatalog, build_prompt


@dataclass
class ToyTrainSettings:
    n_layers: int = 2
    d_model: int = 64
    n_heads: int = 4
    d_ff: int = 128
    prefix_len: int = 64
    max_seq_len: int | None = None  # None sizes the model to the data
    seed: int = 0
    epochs: int = 30
    batch_size: int = 32
    lr: float = 1e-2
    backbone_frozen: bool = False
    max_new_tokens: int = 8


def dictionary_text_corpus(dictionary: PolyphoneDictionary) -> list[str]:
    """Every candidate reading and knowledge line the dictionary can emit,
    so prompt text for any entry stays in-vocabulary."""
    lines = []
    no_truncation = KnowledgeLimits(max_definitions=10**6, max_phrases=10**6)
    for character in sorted(dictionary.entries):
        lines.append(character)
        for sense in dictionary.entries[character].senses:
            lines.append(render_sense_line(sense, no_truncation))
    return lines


def render_training_pairs(
    samples: list[Sample],
    dictionary: PolyphoneDictionary,
    style: PromptStyle,
    limits: KnowledgeLimits | None = None,
    catalog: TemplateCatalog | None = None,
) -> tuple[list[str], list[str]]:
    prompts, answers = [], []
    for sample in samples:
        if sample.gold_pinyin is None:
            raise EmptyDataset("training samples need gold labels")
        prompts.append(build_prompt(sample, dictionary, style, limits, catalog).text)
        answers.append(sample.gold_pinyin.text)
    return prompts, answers


def make_toy_backend(
    train_samples: list[Sample],
    dictionary: PolyphoneDictionary,
    style: PromptStyle,
    settings: ToyTrainSettings | None = None,
    limits: KnowledgeLimits | None = None,
    catalog: TemplateCatalog | None = None,
) -> tuple[ToyBackend, TrainResult]:
    """Render prompts, build the vocabulary, train a fresh model."""
    settings = settings or ToyTrainSettings()
    prompts, answers = render_training_pairs(train_samples, dictionary, style, limits, catalog)
    tokenizer = CharTokenizer.build(prompts + answers + dictionary_text_corpus(dictionary))

    pairs = [(tokenizer.tokenize(p), tokenizer.tokenize(a)) for p, a in zip(prompts, answers)]
    longest = max(len(p) + 2 + max(len(a) + 1, settings.max_new_tokens + 1) for p, a in pairs)
    max_seq_len = settings.max_seq_len if settings.max_seq_len else longest + 16

    config = ToyGlmConfig(
        vocab_size=len(tokenizer),
        n_layers=settings.n_layers,
        d_model=settings.d_model,
        n_heads=settings.n_heads,
        d_ff=settings.d_ff,
        max_seq_len=max_seq_len,
        prefix_len=settings.prefix_len,
        seed=settings.seed,
    )
    model = ToyGlm(config)
    result = train(
        model,
        tokenizer,
        pairs,
        TrainOptions(
            lr=settings.lr,
            batch_size=settings.batch_size,
            epochs=settings.epochs,
            backbone_frozen=settings.backbone_frozen,
            seed=settings.seed,
        ),
    )
    return ToyBackend(model, tokenizer), result


def make_pipeline_factory(
    dictionary: PolyphoneDictionary,
    settings: ToyTrainSettings,
    limits: KnowledgeLimits | None = None,
    catalog: TemplateCatalog | None = None,
):
    """Factory for the ablation runner: trains one backend per condition."""

    def factory(style: PromptStyle, subset: list[Sample]) -> PolyphonePipeline:
        backend, _ = make_toy_backend(subset, dictionary, style, settings, limits, catalog)
        return PolyphonePipeline(
            dictionary,
            backend,
            style=style,
            limits=limits,
            catalog=catalog,
            max_new_tokens=settings.max_new_tokens,
        )

    return factory
