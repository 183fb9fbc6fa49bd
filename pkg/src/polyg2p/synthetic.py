"""Rule-generated polyphone corpora for desk-scale end-to-end runs.

Each synthetic character has two readings. A reading is signalled by cue
words that appear in the sentence before the target character, and the
same cue words are stored as the reading's phrases in the dictionary, so
knowledge-augmented prompts carry the disambiguating signal explicitly.
Half the characters differ only in tone between their readings, which
makes blind spelling mistakes expensive. A few characters can be held out
of the training corpus entirely: predicting them requires the dictionary
knowledge, not memorization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .dictionary import PolyphoneDictionary, RawRecord, build_dictionary
from .pinyin import PinyinSyllable
from .prompting import Sample

TARGET_CHARS = "山水火木金土日月云风雨雪江河湖海天地星辰"

_BASES = [
    "shan", "shui", "huo", "mu", "jin", "tu", "ri", "yue", "yun", "feng",
    "yu", "xue", "jiang", "he", "hu", "hai", "tian", "di", "xing", "chen",
]
_ALT_BASES = [
    "can", "po", "lie", "duo", "gan", "cha", "mi", "le", "qun", "pang",
    "wan", "nong", "gang", "ke", "fu", "mai", "pian", "zhe", "hang", "su",
]

# One discriminator character per (character, reading, cue slot); these
# appear nowhere else, so each uniquely identifies a reading.
_DISCRIMINATORS = (
    "东西南北左右前后高低长短大小多少新旧好坏"
    "红绿蓝紫黑白灰黄轻重快慢冷热干湿深浅宽窄"
    "远近早晚春夏秋冬笔墨纸砚琴棋书画诗词歌赋"
    "衣帽鞋袜车马舟船茶饭酒菜门窗灯烛桥路街巷"
)
_CUE_SUFFIX = "儿"
_FILLERS = "的一是了我有他这中就不人都说要"
_DEF_CHARS = "甲乙丙丁戊己庚辛壬癸"

CUES_PER_READING = 2


def _readings(i: int) -> tuple[PinyinSyllable, PinyinSyllable]:
    if i % 2 == 0:
        return PinyinSyllable(_BASES[i], 2), PinyinSyllable(_BASES[i], 4)
    return PinyinSyllable(_BASES[i], 1), PinyinSyllable(_ALT_BASES[i], 3)


def _cues(i: int, reading: int) -> list[str]:
    slot = (i * 2 + reading) * CUES_PER_READING
    return [_DISCRIMINATORS[slot + k] + _CUE_SUFFIX for k in range(CUES_PER_READING)]


def _definition(i: int, reading: int) -> str:
    j = i * 2 + reading
    return _DEF_CHARS[j % 10] + _DEF_CHARS[(3 * j + 1) % 10]


@dataclass
class SyntheticTask:
    dictionary: PolyphoneDictionary
    train: list[Sample]
    test: list[Sample]
    unseen_chars: tuple[str, ...]


def build_synthetic_dictionary(n_chars: int = 20) -> PolyphoneDictionary:
    records = []
    for i in range(n_chars):
        char = TARGET_CHARS[i]
        first, second = _readings(i)
        for reading, pinyin, count in ((0, first, 7), (1, second, 3)):
            records.append(
                RawRecord(
                    character=char,
                    pinyin=pinyin,
                    pos_tags=("名" if reading == 0 else "动",),
                    definitions=(_definition(i, reading),),
                    phrases=tuple(cue + char for cue in _cues(i, reading)),
                    frequency_count=count,
                )
            )
    return build_dictionary(records, provenance="synthetic")


def _make_sample(i: int, reading: int, rng: random.Random) -> Sample:
    char = TARGET_CHARS[i]
    gold = _readings(i)[reading]
    cue = rng.choice(_cues(i, reading))
    prefix = "".join(rng.choice(_FILLERS) for _ in range(rng.randint(1, 2)))
    middle = "".join(rng.choice(_FILLERS) for _ in range(rng.randint(0, 1)))
    suffix = "".join(rng.choice(_FILLERS) for _ in range(rng.randint(1, 2)))
    sentence = prefix + cue + middle + char + suffix
    index = len(prefix) + len(cue) + len(middle)
    return Sample(sentence=sentence, target_index=index, target_char=char, gold_pinyin=gold)


def make_synthetic_task(
    n_chars: int = 20,
    n_train: int = 500,
    n_test: int = 100,
    seed: int = 0,
    n_unseen_chars: int = 3,
    rare_reading_prob: float = 0.3,
) -> SyntheticTask:
    """Sample a train/test pair over ``n_chars`` synthetic polyphones.

    The last ``n_unseen_chars`` characters never occur in the training
    corpus but keep their dictionary entries, mimicking characters that a
    deployed system meets for the first time.
    """
    if not 0 < n_chars <= len(TARGET_CHARS):
        raise ValueError(f"n_chars must be in 1..{len(TARGET_CHARS)}")
    if n_unseen_chars >= n_chars:
        raise ValueError("need at least one trainable character")
    dictionary = build_synthetic_dictionary(n_chars)
    train_pool = list(range(n_chars - n_unseen_chars))
    test_pool = list(range(n_chars))

    def sample_many(n: int, pool: list[int], rng: random.Random) -> list[Sample]:
        out = []
        for _ in range(n):
            i = rng.choice(pool)
            reading = 1 if rng.random() < rare_reading_prob else 0
            out.append(_make_sample(i, reading, rng))
        return out

    train = sample_many(n_train, train_pool, random.Random(seed))
    test = sample_many(n_test, test_pool, random.Random(seed + 1))
    unseen = tuple(TARGET_CHARS[i] for i in range(n_chars - n_unseen_chars, n_chars))
    return SyntheticTask(dictionary=dictionary, train=train, test=test, unseen_chars=unseen)
