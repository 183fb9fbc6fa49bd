import json

import pytest

from polyg2p import (
    KnowledgeLimits,
    RawRecord,
    build_dictionary,
    load_dictionary,
    parse_pinyin,
    save_dictionary,
)
from polyg2p.dictionary import candidate_count_histogram, load_raw_records
from polyg2p.errors import SchemaError, UnknownCharacter

from .conftest import DATA, GOLDEN


def rec(char, pinyin, count, **kw):
    return RawRecord(char, parse_pinyin(pinyin), frequency_count=count, **kw)


class TestBuild:
    def test_orders_by_descending_count(self):
        d = build_dictionary([rec("山", "a1", 5), rec("山", "b2", 9)])
        assert [c.text for c in d.candidates("山")] == ["b2", "a1"]

    def test_monophone_dropped(self):
        d = build_dictionary([rec("山", "a1", 3)])
        assert "山" not in d
        assert d.entry_count == 0

    def test_duplicate_pinyin_merges_to_monophone(self):
        d = build_dictionary([rec("山", "a1", 5), rec("山", "a1", 5)])
        assert "山" not in d

    def test_merge_concatenates(self):
        d = build_dictionary(
            [
                rec("山", "a1", 5, definitions=("d1",), phrases=("p山",)),
                rec("山", "a1", 0, definitions=("d2", "d1"), phrases=("q山",)),
                rec("山", "b2", 1),
            ]
        )
        sense = d.entries["山"].senses[0]
        assert sense.pinyin.text == "a1"
        assert sense.definitions == ("d1", "d2")
        assert sense.phrases == ("p山", "q山")

    def test_tie_keeps_first_appearance(self):
        d = build_dictionary([rec("山", "b2", 4), rec("山", "a1", 4)])
        assert [c.text for c in d.candidates("山")] == ["b2", "a1"]

    def test_rank_contiguous(self):
        d = build_dictionary([rec("山", "a1", 1), rec("山", "b2", 9), rec("山", "c3", 4)])
        assert [s.freq_rank for s in d.entries["山"].senses] == [0, 1, 2]

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            build_dictionary([rec("山", "a1", -1)])


class TestLoad:
    def test_fixture(self, fixture_dict):
        assert fixture_dict.entry_count == 3
        assert [c.text for c in fixture_dict.candidates("红")] == ["hong2", "gong1"]
        assert [c.text for c in fixture_dict.candidates("咯")] == ["luo4", "ka3", "lo5"]

    def test_absent_character(self, fixture_dict):
        assert fixture_dict.candidates("水") == []

    def test_all_entries_polyphonic(self, fixture_dict):
        for entry in fixture_dict.entries.values():
            texts = [c.text for c in entry.candidate_pinyin()]
            assert len(texts) >= 2
            assert len(set(texts)) == len(texts)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.jsonl"
        p.write_text("# nothing here\n\n", encoding="utf-8")
        assert load_dictionary(str(p)).entry_count == 0

    def _write(self, tmp_path, lines):
        p = tmp_path / "dict.jsonl"
        p.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return str(p)

    def _entry(self, char="红", senses=None):
        if senses is None:
            senses = [
                {"pinyin": "hong2", "pos": [], "defs": [], "phrases": [], "freq_rank": 0},
                {"pinyin": "gong1", "pos": [], "defs": [], "phrases": [], "freq_rank": 1},
            ]
        return json.dumps({"char": char, "senses": senses}, ensure_ascii=False)

    def test_single_sense_rejected(self, tmp_path):
        line = self._entry(senses=[{"pinyin": "hong2", "freq_rank": 0}])
        with pytest.raises(SchemaError):
            load_dictionary(self._write(tmp_path, [line]))

    def test_duplicate_character_rejected(self, tmp_path):
        path = self._write(tmp_path, [self._entry(), self._entry()])
        with pytest.raises(SchemaError) as err:
            load_dictionary(path)
        assert err.value.line == 2

    def test_duplicate_pinyin_rejected(self, tmp_path):
        line = self._entry(
            senses=[
                {"pinyin": "hong2", "freq_rank": 0},
                {"pinyin": "hong2", "freq_rank": 1},
            ]
        )
        with pytest.raises(SchemaError):
            load_dictionary(self._write(tmp_path, [line]))

    def test_gap_in_ranks_rejected(self, tmp_path):
        line = self._entry(
            senses=[
                {"pinyin": "hong2", "freq_rank": 0},
                {"pinyin": "gong1", "freq_rank": 2},
            ]
        )
        with pytest.raises(SchemaError):
            load_dictionary(self._write(tmp_path, [line]))

    def test_phrase_must_contain_character(self, tmp_path):
        line = self._entry(
            senses=[
                {"pinyin": "hong2", "phrases": ["蓝天"], "freq_rank": 0},
                {"pinyin": "gong1", "freq_rank": 1},
            ]
        )
        with pytest.raises(SchemaError) as err:
            load_dictionary(self._write(tmp_path, [line]))
        assert "蓝天" in err.value.reason

    def test_bad_json_names_line(self, tmp_path):
        path = self._write(tmp_path, [self._entry(), "{not json"])
        with pytest.raises(SchemaError) as err:
            load_dictionary(path)
        assert err.value.line == 2

    def test_round_trip_bytes(self, fixture_dict, tmp_path):
        out1 = tmp_path / "one.jsonl"
        out2 = tmp_path / "two.jsonl"
        save_dictionary(fixture_dict, str(out1))
        save_dictionary(load_dictionary(str(out1)), str(out2))
        assert out1.read_bytes() == out2.read_bytes()
        assert out1.read_bytes() == (DATA / "fixture_dict.jsonl").read_bytes()

    def test_order_stable_across_loads(self):
        a = load_dictionary(str(DATA / "fixture_dict.jsonl"))
        b = load_dictionary(str(DATA / "fixture_dict.jsonl"))
        for char in a.entries:
            assert a.candidates(char) == b.candidates(char)


class TestKnowledgeBlock:
    def test_golden(self, fixture_dict):
        block = fixture_dict.knowledge_block("红", KnowledgeLimits(2, 2))
        assert block == (GOLDEN / "knowledge_hong_2_2.txt").read_text(encoding="utf-8")

    def test_zero_limits_structure_only(self, fixture_dict):
        block = fixture_dict.knowledge_block("红", KnowledgeLimits(0, 0))
        assert block == "hong2: 形、名\ngong1: 名"

    def test_unknown_character(self, fixture_dict):
        with pytest.raises(UnknownCharacter):
            fixture_dict.knowledge_block("水")

    def test_deterministic(self, fixture_dict):
        limits = KnowledgeLimits(1, 1)
        assert fixture_dict.knowledge_block("咯", limits) == fixture_dict.knowledge_block("咯", limits)


class TestRawRecords:
    def test_load_fixture(self):
        records = load_raw_records(str(DATA / "raw_records.tsv"))
        assert len(records) == 5
        d = build_dictionary(records)
        assert d.entry_count == 2  # 天 is monophonic and dropped
        assert candidate_count_histogram(d) == {2: 2}

    def test_bad_line_numbered(self, tmp_path):
        p = tmp_path / "raw.tsv"
        p.write_text("红\thong2\t9\n红\tnope\t1\n", encoding="utf-8")
        with pytest.raises(SchemaError) as err:
            load_raw_records(str(p))
        assert err.value.line == 2
