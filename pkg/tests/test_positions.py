import pytest

from polyg2p.errors import InvalidIndex
from polyg2p.generation import PositionPair, encode_positions


def test_spec_shape():
    pairs = encode_positions(context_len=5, mask_index=3, span_len=2)
    assert [p.pos1 for p in pairs] == [0, 1, 2, 3, 4, 3, 3]
    assert [p.pos2 for p in pairs] == [0, 0, 0, 0, 0, 1, 2]


def test_minimal():
    assert encode_positions(1, 0, 1) == [PositionPair(0, 0), PositionPair(0, 1)]


@pytest.mark.parametrize("args", [(4, 4, 1), (4, -1, 1), (4, 0, 0), (0, 0, 1)])
def test_invalid(args):
    with pytest.raises(InvalidIndex):
        encode_positions(*args)


def test_exhaustive_against_rule():
    for context_len in range(1, 11):
        for mask_index in range(context_len):
            for span_len in range(1, 5):
                pairs = encode_positions(context_len, mask_index, span_len)
                assert len(pairs) == context_len + span_len
                for i in range(context_len):
                    assert pairs[i] == PositionPair(i, 0)
                for j in range(span_len):
                    assert pairs[context_len + j] == PositionPair(mask_index, j + 1)
