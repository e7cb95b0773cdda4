"""Pure functions on a single slice of ``k`` cells.

Bit and cell positions are 1-based here, matching how the code is usually
described: a slice reserved for bit ``i`` fills cell ``i`` first, then
``i+1`` and so on cyclically.
"""
from __future__ import annotations

import enum
from collections.abc import Sequence
from typing import Optional

from .errors import FullSlice, IndexMismatch, InvalidPattern


class SliceClass(enum.Enum):
    EMPTY = "empty"
    ACTIVE = "active"
    FULL = "full"


def weight(levels: Sequence[int]) -> int:
    return sum(levels)


def parity(levels: Sequence[int]) -> int:
    return sum(levels) % 2


def slice_classify(levels: Sequence[int], q: int) -> SliceClass:
    w = sum(levels)
    if w == 0:
        return SliceClass.EMPTY
    if w == len(levels) * (q - 1):
        return SliceClass.FULL
    return SliceClass.ACTIVE


def _matches_from(levels: Sequence[int], q: int, start: int) -> bool:
    # Scanning cyclically from `start` (0-based): run of q-1, one value in [1, q-1], zeros.
    k = len(levels)
    top = q - 1
    pos = 0
    while pos < k and levels[(start + pos) % k] == top:
        pos += 1
    if pos == 0:
        if not 1 <= levels[start] <= top:
            return False
        pos = 1
    elif pos < k and levels[(start + pos) % k] != 0:
        # the last non-zero cell may be partial
        pos += 1
    return all(levels[(start + p) % k] == 0 for p in range(pos, k))


def _starts(levels: Sequence[int], q: int) -> list[int]:
    return [s for s in range(len(levels)) if _matches_from(levels, q, s)]


def slice_index(levels: Sequence[int], q: int) -> Optional[int]:
    """Return the 1-based bit index an active slice represents.

    Empty and full slices carry no index and give ``None``. An active slice
    without exactly one valid start raises :class:`InvalidPattern`.
    """
    if slice_classify(levels, q) is not SliceClass.ACTIVE:
        return None
    starts = _starts(levels, q)
    if len(starts) != 1:
        raise InvalidPattern(f"slice {tuple(levels)} has start candidates {starts}")
    return starts[0] + 1


def slice_validate(levels: Sequence[int], q: int) -> bool:
    if any(not 0 <= v < q for v in levels):
        return False
    if slice_classify(levels, q) is not SliceClass.ACTIVE:
        return True
    return len(_starts(levels, q)) == 1


def slice_increment(levels: Sequence[int], q: int, bit_index: int) -> tuple[int, ...]:
    """Add one unit of weight to a slice on behalf of ``bit_index`` (1-based).

    The first cell scanning cyclically from ``bit_index`` whose level is
    below ``q - 1`` goes up by one.
    """
    k = len(levels)
    if not 1 <= bit_index <= k:
        raise IndexError(f"bit index {bit_index} outside 1..{k}")
    cls = slice_classify(levels, q)
    if cls is SliceClass.FULL:
        raise FullSlice(f"slice {tuple(levels)} is full")
    if cls is SliceClass.ACTIVE:
        owner = slice_index(levels, q)
        if owner != bit_index:
            raise IndexMismatch(f"slice belongs to bit {owner}, not {bit_index}")
    out = list(levels)
    for step in range(k):
        pos = (bit_index - 1 + step) % k
        if out[pos] < q - 1:
            out[pos] += 1
            return tuple(out)
    raise AssertionError("unreachable: non-full slice has a non-full cell")
