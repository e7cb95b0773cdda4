import random

import pytest
from hypothesis import given, settings, strategies as st

from ilifc import (
    CodecState,
    CodeParams,
    Exhausted,
    IilifcState,
    SameData,
    WriteKind,
    WriteStrategy,
    choose_mode,
    erasure_diagnostics,
    increment_inversion,
)
from ilifc.codec import mask_to_bits


def word(k, ones):
    return tuple(1 if i < ones else 0 for i in range(k))


@pytest.mark.parametrize(
    "k,d,invert,data_cost,inv_cost",
    [(16, 9, True, 7, 1), (16, 8, False, 8, 0), (5, 3, False, 3, 0), (5, 4, True, 1, 1), (1, 1, False, 1, 0)],
)
def test_choose_mode_examples(k, d, invert, data_cost, inv_cost):
    dec = choose_mode((0,) * k, word(k, d), k, exhausted=False)
    assert (dec.invert, dec.predicted_data_cost, dec.predicted_inversion_cost) == (invert, data_cost, inv_cost)


def test_choose_mode_exhausted_keeps_mode():
    dec = choose_mode((0,) * 16, (1,) * 16, 16, exhausted=True)
    assert not dec.invert and dec.predicted_data_cost == 16


def test_choose_mode_same_data():
    with pytest.raises(SameData):
        choose_mode((0, 1), (0, 1), 2, exhausted=False)


def test_increment_inversion():
    assert increment_inversion((0, 0), 3) == (1, 0)
    assert increment_inversion((2, 1), 3) == (2, 2)
    with pytest.raises(Exhausted):
        increment_inversion((2, 2), 3)


def test_fresh_all_ones_is_a_pure_mode_change():
    st_ = IilifcState(CodeParams(640, 16, 4, 32))
    out = st_.write((1,) * 16)
    assert out.applied and out.inverted
    assert out.data_cell_changes == 0 and out.inversion_cell_changes == 1
    assert st_.mode == 1
    assert st_.decode() == (1,) * 16
    assert st_.used_levels() == 0


def test_exhausted_cells_force_keep_mode():
    k = 4
    params = CodeParams(16 + 1, k, 2, 1)
    st_ = IilifcState.from_levels(params, [1], [(0,) * k] * 4)
    assert st_.exhausted and st_.mode == 1
    assert st_.decode() == (1,) * k
    out = st_.write((0,) * k)
    assert out.applied and not out.inverted
    assert out.data_cell_changes == k and out.inversion_cell_changes == 0
    assert st_.decode() == (0,) * k


def test_decode_in_inverted_mode():
    params = CodeParams(5, 2, 2, 1)
    st_ = IilifcState.from_levels(params, [1], [(1, 0), (0, 1)])
    assert st_.data.decode() == (1, 1)
    assert st_.decode() == (0, 0)


def test_same_data_rejected():
    st_ = IilifcState(CodeParams(20, 4, 3, 4))
    with pytest.raises(SameData):
        st_.write((0, 0, 0, 0))


def test_diagnostics_examples():
    st_ = IilifcState(CodeParams(640, 16, 4, 32))
    d = erasure_diagnostics(st_)
    assert (d.unmapped_bits, d.empty_slices, d.unused_levels, d.exhausted) == (16, 38, 38 * 16 * 3, False)
    st_.write(word(16, 1))
    assert erasure_diagnostics(st_).unmapped_bits == 15
    params = CodeParams(18, 4, 2, 2)
    full = IilifcState.from_levels(params, [0, 0], [(1,) * 4] * 4)
    d = full.diagnostics()
    assert (d.unmapped_bits, d.empty_slices, d.unused_levels) == (4, 0, 0)


def test_text_form_prepends_inversion_cells():
    st_ = IilifcState(CodeParams(7, 2, 3, 2))
    st_.write((1, 1))  # d = 2 > 1.5, so only the mode changes
    st_.write((1, 0))
    assert st_.to_text() == "ILIFC n=7 k=2 q=3 r=2\n1 0 0 1 0 0 0\n"
    again = IilifcState.from_text(st_.to_text())
    assert again.decode() == st_.decode() == (1, 0)
    assert again.mode == 1


def test_unusual_write_rescues_a_usual_failure():
    # k=4, one empty slice, bits 3 and 4 unmapped. Writing bits 3 and 4 in
    # keep mode needs two empty slices; the switched write only touches bits 1, 2.
    k, q = 4, 2
    params = CodeParams(4 * 5 + 2, k, q, 2)
    rows = [(1, 0, 0, 0), (0, 1, 0, 0), (1,) * 4, (1,) * 4, (0,) * 4]
    st_ = IilifcState.from_levels(params, [0, 0], rows)
    target = (1, 1, 1, 1)
    usual = st_.copy().write(target, WriteStrategy.USUAL_ONLY)
    assert usual.kind is WriteKind.ERASE_REQUIRED
    assert (usual.diagnostics.unmapped_bits, usual.diagnostics.empty_slices) == (2, 1)
    out = st_.write(target, WriteStrategy.ALLOW_UNUSUAL)
    assert out.applied and out.unusual and out.inverted
    assert out.data_cell_changes == 2
    assert st_.decode() == target


def test_zero_inversion_cells_match_plain_ilifc():
    rng = random.Random(7)
    params = CodeParams(40, 6, 3, 0)
    plain, wrapped = CodecState(params), IilifcState(params)
    assert wrapped.exhausted
    while True:
        nxt = rng.getrandbits(6)
        if nxt == plain.stored_mask:
            continue
        a, b = plain.write(nxt), wrapped.write(nxt)
        assert a == b
        assert plain.to_text() == wrapped.to_text()
        if not a.applied:
            break


@st.composite
def iilifc_runs(draw):
    k = draw(st.integers(2, 12))
    q = draw(st.integers(2, 6).filter(lambda q: k % 2 == 0 or (q - 1) % 2 == 0))
    r = draw(st.integers(0, 6))
    n = k * k + r + draw(st.integers(0, 2 * k))
    strategy = draw(st.sampled_from(list(WriteStrategy)))
    words = draw(st.lists(st.integers(0, (1 << k) - 1), min_size=1, max_size=80))
    return CodeParams(n, k, q, r), strategy, words


@settings(max_examples=150, deadline=None)
@given(iilifc_runs())
def test_write_sequences(run):
    params, strategy, words = run
    k = params.k
    st_ = IilifcState(params)
    for nxt in words:
        cur = st_.current_mask
        if nxt == cur:
            continue
        exhausted = st_.exhausted
        d = (nxt ^ cur).bit_count()
        snapshot = st_.to_text()
        used = st_.used_levels()
        out = st_.write(nxt, strategy)
        if not out.applied:
            assert st_.to_text() == snapshot
            break
        assert st_.decode() == mask_to_bits(nxt, k)
        assert st_.used_levels() - used == out.data_cell_changes
        stored = st_.data.stored_mask
        assert stored == (nxt ^ ((1 << k) - 1) if st_.mode else nxt)
        if not out.unusual:
            assert out.total_changes == (d if exhausted else min(d, k - d + 1))
            if not exhausted:
                assert out.data_cell_changes <= params.delta
        else:
            assert strategy is WriteStrategy.ALLOW_UNUSUAL and not exhausted
            assert out.data_cell_changes <= k - 1
        st_.check_invariants()
