import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyg2p import PinyinSyllable, edit_distance, parse_pinyin
from polyg2p.errors import MalformedPinyin
from polyg2p.pinyin import format_pinyin

from .oracles import naive_levenshtein


def test_parse_basic():
    assert parse_pinyin("hong2") == PinyinSyllable("hong", 2)
    assert parse_pinyin("a1") == PinyinSyllable("a", 1)


@pytest.mark.parametrize(
    "bad", ["hong", "", "2", "hong0", "hong6", "Hong2", "hong22", " hong2", "hong2 ", "h@ng2", "红2"]
)
def test_parse_rejects(bad):
    with pytest.raises(MalformedPinyin):
        parse_pinyin(bad)


def test_constructor_validates():
    with pytest.raises(MalformedPinyin):
        PinyinSyllable("", 1)
    with pytest.raises(MalformedPinyin):
        PinyinSyllable("hong", 0)
    with pytest.raises(MalformedPinyin):
        PinyinSyllable("hoNg", 2)


@given(st.from_regex(r"[a-z]{1,8}", fullmatch=True), st.integers(1, 5))
def test_round_trip(base, tone):
    syllable = PinyinSyllable(base, tone)
    assert parse_pinyin(format_pinyin(syllable)) == syllable
    assert format_pinyin(parse_pinyin(syllable.text)) == syllable.text


def test_edit_distance_examples():
    assert edit_distance("hong2", "hong2") == 0
    # expected values computed by the naive recursive oracle
    assert naive_levenshtein("gong", "gong1") == 1
    assert naive_levenshtein("gong", "hong2") == 2
    assert edit_distance("gong", "gong1") == 1
    assert edit_distance("gong", "hong2") == 2


def test_edit_distance_empty():
    assert edit_distance("", "") == 0
    assert edit_distance("", "abc") == 3
    assert edit_distance("abc", "") == 3


short = st.text(alphabet="aghno12", max_size=8)


@given(short, short)
def test_matches_oracle(a, b):
    assert edit_distance(a, b) == naive_levenshtein(a, b)


@given(short, short)
def test_symmetry_and_identity(a, b):
    assert edit_distance(a, b) == edit_distance(b, a)
    assert edit_distance(a, a) == 0
    assert (edit_distance(a, b) == 0) == (a == b)


@given(short, short, short)
def test_triangle_inequality(a, b, c):
    assert edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c)


def test_exhaustive_small():
    # every pair with combined length <= 4 over a 3-symbol alphabet
    alphabet = "ag1"
    strings = [
        "".join(p)
        for n in range(5)
        for p in itertools.product(alphabet, repeat=n)
    ]
    for a in strings:
        for b in strings:
            if len(a) + len(b) <= 4:
                assert edit_distance(a, b) == naive_levenshtein(a, b)
