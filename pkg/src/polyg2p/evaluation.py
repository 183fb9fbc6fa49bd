"""Accuracy evaluation, the majority-vote baseline, and the ablation grid.

Reports are machine-readable (one JSON object per line) plus an aligned
plain-text table. Everything volatile (wall-clock timing) lives in a
dedicated ``timing`` field so reports from identical runs compare
byte-equal without it.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Protocol, Sequence

from .errors import EmptyDataset
from .pinyin import PinyinSyllable
from .prompting import PromptStyle, Sample


@dataclass(frozen=True)
class Prediction:
    """One predictor output; ``was_valid`` is None when no generation
    step was involved (e.g. table lookups)."""

    pinyin: PinyinSyllable
    was_valid: bool | None = None


class Predictor(Protocol):
    predictor_id: str

    def __call__(self, sample: Sample) -> Prediction:
        ...


@dataclass
class MajorityModel:
    """Context-free baseline: each character's most frequent training
    reading, with a global fallback for characters never seen."""

    table: dict[str, PinyinSyllable]
    fallback: PinyinSyllable
    predictor_id: str = "majority"

    def __call__(self, sample: Sample) -> Prediction:
        return Prediction(pinyin=self.predict(sample))

    def predict(self, sample: Sample) -> PinyinSyllable:
        return self.table.get(sample.target_char, self.fallback)


def _argmax_by_count(counts: dict[str, int], readings: dict[str, PinyinSyllable]) -> PinyinSyllable:
    # ties break toward the lexicographically smaller canonical text
    best = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0][0]
    return readings[best]


def train_majority(train: Sequence[Sample]) -> MajorityModel:
    if not train:
        raise EmptyDataset("majority baseline needs a non-empty training set")
    per_char: dict[str, dict[str, int]] = {}
    global_counts: dict[str, int] = {}
    readings: dict[str, PinyinSyllable] = {}
    for sample in train:
        if sample.gold_pinyin is None:
            raise EmptyDataset("majority training requires gold labels")
        text = sample.gold_pinyin.text
        readings[text] = sample.gold_pinyin
        per_char.setdefault(sample.target_char, {})
        per_char[sample.target_char][text] = per_char[sample.target_char].get(text, 0) + 1
        global_counts[text] = global_counts.get(text, 0) + 1
    table = {ch: _argmax_by_count(counts, readings) for ch, counts in per_char.items()}
    return MajorityModel(table=table, fallback=_argmax_by_count(global_counts, readings))


def predict_majority(model: MajorityModel, sample: Sample) -> PinyinSyllable:
    return model.predict(sample)


@dataclass
class EvalReport:
    condition: str
    n_samples: int
    n_correct: int
    accuracy: float
    invalid_generation_rate: float
    per_character: dict[str, tuple[int, int]]  # char -> (n, n_correct)
    config: dict = field(default_factory=dict)
    duration_s: float = 0.0

    def to_record(self) -> dict:
        per_char = {
            ch: {"n": n, "correct": c, "accuracy": c / n}
            for ch, (n, c) in sorted(self.per_character.items())
        }
        return {
            "condition": self.condition,
            "n_samples": self.n_samples,
            "n_correct": self.n_correct,
            "accuracy": self.accuracy,
            "invalid_generation_rate": self.invalid_generation_rate,
            "config": self.config,
            "per_character": per_char,
            "timing": {"duration_s": self.duration_s},
        }


def evaluate(
    predictor: Callable[[Sample], Prediction],
    samples: Sequence[Sample],
    condition: str = "",
    config: dict | None = None,
) -> EvalReport:
    """Exact-match accuracy of the predictor over labeled samples."""
    started = time.perf_counter()
    n_correct = 0
    n_generated = 0
    n_invalid = 0
    per_character: dict[str, list[int]] = {}
    for sample in samples:
        if sample.gold_pinyin is None:
            raise EmptyDataset("evaluation requires gold labels")
        prediction = predictor(sample)
        hit = prediction.pinyin == sample.gold_pinyin
        n_correct += int(hit)
        if prediction.was_valid is not None:
            n_generated += 1
            n_invalid += int(not prediction.was_valid)
        slot = per_character.setdefault(sample.target_char, [0, 0])
        slot[0] += 1
        slot[1] += int(hit)
    n = len(samples)
    return EvalReport(
        condition=condition or getattr(predictor, "predictor_id", "predictor"),
        n_samples=n,
        n_correct=n_correct,
        accuracy=(n_correct / n) if n else 0.0,
        invalid_generation_rate=(n_invalid / n_generated) if n_generated else 0.0,
        per_character={ch: (v[0], v[1]) for ch, v in per_character.items()},
        config=dict(config or {}),
        duration_s=time.perf_counter() - started,
    )


@dataclass(frozen=True)
class AblationCondition:
    style: PromptStyle
    train_ratio: float = 1.0

    @property
    def label(self) -> str:
        return f"{self.style.label},ratio={self.train_ratio:g}"


def run_ablation(
    grid: Sequence[AblationCondition],
    pipeline_factory: Callable[[PromptStyle, list[Sample]], Callable[[Sample], Prediction]],
    train: Sequence[Sample],
    test: Sequence[Sample],
    seed: int = 0,
) -> list[EvalReport]:
    """One evaluation per grid condition.

    Training subsets at ratio r are the first floor(r*n) samples of one
    seeded shuffle of the train split, so smaller ratios are strict
    subsets of larger ones.
    """
    if not grid:
        raise ValueError("ablation grid is empty")
    shuffled = list(train)
    random.Random(seed).shuffle(shuffled)
    reports = []
    for condition in grid:
        subset = shuffled[: int(condition.train_ratio * len(shuffled))]
        predictor = pipeline_factory(condition.style, subset)
        config = {
            "style": condition.style.style.value,
            "knowledge": condition.style.include_knowledge,
            "train_ratio": condition.train_ratio,
            "n_train": len(subset),
            "seed": seed,
            "backend": getattr(predictor, "predictor_id", "unknown"),
        }
        reports.append(evaluate(predictor, test, condition=condition.label, config=config))
    return reports


def write_report_records(reports: Sequence[EvalReport], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for report in reports:
            fh.write(json.dumps(report.to_record(), ensure_ascii=False))
            fh.write("\n")


def format_report_table(reports: Sequence[EvalReport]) -> str:
    headers = ("condition", "n", "accuracy", "invalid_rate")
    rows = [
        (r.condition, str(r.n_samples), f"{r.accuracy:.4f}", f"{r.invalid_generation_rate:.4f}")
        for r in reports
    ]
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    lines.extend("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)) for row in rows)
    return "\n".join(lines)
