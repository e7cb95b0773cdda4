import itertools

import pytest
from hypothesis import given, strategies as st

from ilifc.errors import FullSlice, IndexMismatch, InvalidPattern
from ilifc.slices import (
    SliceClass,
    parity,
    slice_classify,
    slice_increment,
    slice_index,
    slice_validate,
    weight,
)


def filled(k, q, start, w):
    """Independent model: w units poured cyclically from cell `start` (1-based)."""
    levels = [0] * k
    pos = start - 1
    while w:
        add = min(q - 1, w)
        levels[pos % k] = add
        w -= add
        pos += 1
    return tuple(levels)


@pytest.mark.parametrize(
    "levels,q,expected",
    [
        ((0, 0, 0, 0), 2, SliceClass.EMPTY),
        ((1, 1, 1, 1), 2, SliceClass.FULL),
        ((2, 1, 0), 3, SliceClass.ACTIVE),
    ],
)
def test_classify(levels, q, expected):
    assert slice_classify(levels, q) is expected


def test_weight_and_parity():
    assert weight((2, 1, 0)) == 3
    assert parity((2, 1, 0)) == 1
    assert parity((1, 1, 1, 1)) == 0


def test_increment_examples():
    assert slice_increment((0, 0, 0, 0), 2, 2) == (0, 1, 0, 0)
    assert slice_increment((0, 1, 1, 0), 2, 2) == (0, 1, 1, 1)
    step = slice_increment((0, 2, 1), 3, 2)
    assert step == (0, 2, 2)
    assert slice_increment(step, 3, 2) == (1, 2, 2)


def test_increment_errors():
    with pytest.raises(FullSlice):
        slice_increment((1, 1, 1, 1), 2, 1)
    with pytest.raises(IndexMismatch):
        slice_increment((0, 1, 1, 0), 2, 1)


@pytest.mark.parametrize(
    "levels,q,expected",
    [((0, 1, 1, 0), 2, 2), ((1, 0, 2), 3, 3), ((1, 1, 1, 1), 2, None), ((0, 0, 0), 3, None)],
)
def test_index_examples(levels, q, expected):
    assert slice_index(levels, q) == expected


def test_validate_examples():
    assert not slice_validate((0, 1, 0, 1), 2)
    assert slice_validate((0, 0, 0, 0), 2)
    assert slice_validate((2, 1, 0), 3)
    assert not slice_validate((0, 3, 0), 3)


def test_index_rejects_corrupt_slice():
    with pytest.raises(InvalidPattern):
        slice_index((0, 1, 0, 1), 2)


@pytest.mark.parametrize("k,q", [(2, 2), (2, 3), (3, 3), (4, 2), (4, 3), (5, 3), (3, 5)])
def test_index_matches_fill_model_exhaustively(k, q):
    valid = {}
    for start in range(1, k + 1):
        for w in range(1, k * (q - 1)):
            levels = filled(k, q, start, w)
            assert levels not in valid, "two starts produce the same active slice"
            valid[levels] = start
    for levels in itertools.product(range(q), repeat=k):
        cls = slice_classify(levels, q)
        if cls is not SliceClass.ACTIVE:
            assert slice_validate(levels, q)
            continue
        if levels in valid:
            assert slice_validate(levels, q)
            assert slice_index(levels, q) == valid[levels]
        else:
            assert not slice_validate(levels, q)


@given(st.data())
def test_repeated_increments_follow_fill_model(data):
    k = data.draw(st.integers(2, 16))
    q = data.draw(st.integers(2, 8))
    bit = data.draw(st.integers(1, k))
    steps = data.draw(st.integers(1, k * (q - 1)))
    levels = (0,) * k
    for w in range(1, steps + 1):
        levels = slice_increment(levels, q, bit)
        assert levels == filled(k, q, bit, w)
        assert weight(levels) == w
        assert slice_validate(levels, q)
        expected = None if w == k * (q - 1) else bit
        assert slice_index(levels, q) == expected
