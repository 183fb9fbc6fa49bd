"""Loading and splitting of marked polyphone corpora.

Two layouts are accepted: a single TSV with ``marked_sentence<TAB>pinyin``
rows, or paired line-aligned files ``<split>.sent`` / ``<split>.lb`` where
the sentence file carries the markers. In both, the target character is
wrapped in two U+2582 symbols.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FormatError
from .pinyin import parse_pinyin
from .prompting import TARGET_MARK, Sample


@dataclass
class DatasetSplit:
    train: list[Sample] = field(default_factory=list)
    dev: list[Sample] = field(default_factory=list)
    test: list[Sample] = field(default_factory=list)
    source: str = ""


def parse_marked_sentence(marked: str, line_no: int = 0) -> tuple[str, int]:
    """Strip the two markers; return (clean sentence, target index)."""
    first = marked.find(TARGET_MARK)
    if first < 0:
        raise FormatError(line_no, "no target markers")
    second = marked.find(TARGET_MARK, first + 1)
    if second < 0:
        raise FormatError(line_no, "only one target marker")
    if marked.find(TARGET_MARK, second + 1) >= 0:
        raise FormatError(line_no, "more than two target markers")
    enclosed = marked[first + 1 : second]
    if len(enclosed) != 1:
        raise FormatError(line_no, f"markers must enclose exactly one character, got {enclosed!r}")
    sentence = marked[:first] + enclosed + marked[second + 1 :]
    return sentence, first


def _row_to_sample(marked: str, pinyin_text: str, line_no: int) -> Sample:
    sentence, index = parse_marked_sentence(marked, line_no)
    return Sample(
        sentence=sentence,
        target_index=index,
        target_char=sentence[index],
        gold_pinyin=parse_pinyin(pinyin_text.strip()),
    )


def load_cpp(path: str | Path, labels_path: str | Path | None = None) -> list[Sample]:
    """Load one corpus file (TSV layout, or sent/lb pair when two paths).

    A ``.sent`` path with no explicit label file picks up the sibling
    ``.lb`` automatically.
    """
    path = Path(path)
    if labels_path is None and path.suffix == ".sent":
        labels_path = path.with_suffix(".lb")
    samples: list[Sample] = []
    if labels_path is not None:
        sentences = Path(path).read_text(encoding="utf-8").splitlines()
        labels = Path(labels_path).read_text(encoding="utf-8").splitlines()
        if len(sentences) != len(labels):
            raise FormatError(0, f"{path} has {len(sentences)} rows but labels have {len(labels)}")
        for line_no, (marked, label) in enumerate(zip(sentences, labels), start=1):
            if not marked.strip():
                continue
            samples.append(_row_to_sample(marked.strip(), label, line_no))
        return samples

    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(line_no, f"expected 2 tab-separated columns, got {len(parts)}")
            samples.append(_row_to_sample(parts[0].strip(), parts[1], line_no))
    return samples


_SPLIT_NAMES = ("train", "dev", "test")


def load_split_dir(dirpath: str | Path) -> DatasetSplit:
    """Load published splits from a directory (TSV or sent/lb layout)."""
    dirpath = Path(dirpath)
    split = DatasetSplit(source=f"files:{dirpath}")
    for name in _SPLIT_NAMES:
        tsv = dirpath / f"{name}.tsv"
        sent = dirpath / f"{name}.sent"
        if tsv.exists():
            setattr(split, name, load_cpp(tsv))
        elif sent.exists():
            setattr(split, name, load_cpp(sent))
        else:
            raise FormatError(0, f"missing split file {name}.tsv or {name}.sent in {dirpath}")
    return split


def apportion(n: int, ratios: tuple[float, ...]) -> list[int]:
    """Largest-remainder apportionment; remainder ties go to earlier buckets."""
    total = sum(ratios)
    if total <= 0 or any(r <= 0 for r in ratios):
        raise ValueError(f"ratios must be positive, got {ratios}")
    quotas = [n * r / total for r in ratios]
    sizes = [int(q) for q in quotas]
    by_remainder = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - sizes[i]), i))
    for i in by_remainder[: n - sum(sizes)]:
        sizes[i] += 1
    return sizes


def split_dataset(samples: list[Sample], ratios: tuple[float, float, float] = (8, 1, 1), seed: int = 0) -> DatasetSplit:
    """Seeded shuffle, then contiguous partition into train/dev/test."""
    shuffled = list(samples)
    random.Random(seed).shuffle(shuffled)
    n_train, n_dev, n_test = apportion(len(shuffled), tuple(ratios))
    return DatasetSplit(
        train=shuffled[:n_train],
        dev=shuffled[n_train : n_train + n_dev],
        test=shuffled[n_train + n_dev :],
        source=f"seeded-split(seed={seed}, ratios={tuple(ratios)})",
    )


@dataclass
class DatasetStats:
    n_samples: int
    n_polyphonic_characters: int
    fraction_two_readings: float
    min_sentence_length: int
    max_sentence_length: int
    readings_per_character: dict[str, int]


def dataset_stats(samples: list[Sample]) -> DatasetStats:
    """Corpus-level statistics over the observed gold labels."""
    readings: dict[str, set[str]] = {}
    min_len = min((len(s.sentence) for s in samples), default=0)
    max_len = max((len(s.sentence) for s in samples), default=0)
    for s in samples:
        if s.gold_pinyin is not None:
            readings.setdefault(s.target_char, set()).add(s.gold_pinyin.text)
    n_chars = len(readings)
    n_two = sum(1 for v in readings.values() if len(v) == 2)
    return DatasetStats(
        n_samples=len(samples),
        n_polyphonic_characters=n_chars,
        fraction_two_readings=(n_two / n_chars) if n_chars else 0.0,
        min_sentence_length=min_len,
        max_sentence_length=max_len,
        readings_per_character={ch: len(v) for ch, v in sorted(readings.items())},
    )
