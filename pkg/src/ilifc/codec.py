"""The plain ILIFC(n, k, q) codec as a cell-level state machine.

Data words are k-bit vectors. Externally they are sequences of 0/1 with
bit 1 first; internally they are ints where bit ``i`` (1-based) is
``1 << (i - 1)``. Slices and bits are 1-based in every public view.
"""
from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Optional

from .errors import IlifcError, InvalidParams, InvalidPattern, SameData
from .params import CodeParams
from .slices import SliceClass, slice_classify, slice_index

BitVector = tuple[int, ...]


def bits_to_mask(bits: Sequence[int]) -> int:
    mask = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit {i + 1} is {b!r}, expected 0 or 1")
        if b:
            mask |= 1 << i
    return mask


def mask_to_bits(mask: int, k: int) -> BitVector:
    return tuple((mask >> i) & 1 for i in range(k))


def _as_mask(data: Sequence[int] | int, k: int) -> int:
    if isinstance(data, int):
        if not 0 <= data < (1 << k):
            raise ValueError(f"mask {data} does not fit in {k} bits")
        return data
    if len(data) != k:
        raise ValueError(f"expected {k} bits, got {len(data)}")
    return bits_to_mask(data)


class WriteKind(enum.Enum):
    APPLIED = "applied"
    ERASE_REQUIRED = "erase_required"


@dataclass(frozen=True)
class EraseDiagnostics:
    """Occupancy counts at the moment a write could not be stored.

    ``unmapped_bits`` is the number of bits without a slice and
    ``empty_slices`` the number of empty slices (the alpha or beta pair,
    depending on the write strategy).
    """

    unmapped_bits: int
    empty_slices: int
    unused_levels: int
    exhausted: bool


@dataclass(frozen=True)
class WriteOutcome:
    kind: WriteKind
    data_cell_changes: int = 0
    inversion_cell_changes: int = 0
    diagnostics: Optional[EraseDiagnostics] = None
    inverted: bool = False
    unusual: bool = False

    @property
    def applied(self) -> bool:
        return self.kind is WriteKind.APPLIED

    @property
    def total_changes(self) -> int:
        return self.data_cell_changes + self.inversion_cell_changes


class CodecState:
    """Slices of an ILIFC block plus the bit-to-slice map and cached data.

    Only ``params.m``, ``params.k`` and ``params.q`` matter here; when the
    state lives inside an I-ILIFC block the inversion cells are held by the
    owner.
    """

    def __init__(self, params: CodeParams):
        self.params = params
        self._k = params.k
        self._m = params.m
        self._top = params.q - 1
        self._cap = params.k * (params.q - 1)
        self._full_mask = (1 << params.k) - 1
        self.erase_count = 0
        self._reset()

    def _reset(self) -> None:
        k, m = self._k, self._m
        self._levels = [0] * (m * k)
        self._weights = [0] * m
        self._slice_of_bit = [-1] * k
        self._bit_of_slice = [-1] * m
        self._unmapped = self._full_mask
        # descending so pop() hands out the lowest-index empty slice
        self._empty = list(range(m - 1, -1, -1))
        self._stored = 0
        self._used = 0

    @classmethod
    def from_levels(cls, params: CodeParams, slices: Iterable[Sequence[int]]) -> CodecState:
        """Build a state from raw slice levels, recovering the map from the cells."""
        st = cls(params)
        rows = [tuple(s) for s in slices]
        if len(rows) != st._m:
            raise InvalidParams(f"expected {st._m} slices, got {len(rows)}")
        k, q = st._k, params.q
        st._empty = []
        st._unmapped = st._full_mask
        for j, row in enumerate(rows):
            if len(row) != k or any(not 0 <= v < q for v in row):
                raise InvalidPattern(f"slice {j + 1} has bad levels {row}")
            st._levels[j * k:(j + 1) * k] = row
            w = sum(row)
            st._weights[j] = w
            st._used += w
            cls_ = slice_classify(row, q)
            if cls_ is SliceClass.EMPTY:
                st._empty.append(j)
            elif cls_ is SliceClass.ACTIVE:
                bit = slice_index(row, q) - 1
                if st._slice_of_bit[bit] >= 0:
                    raise InvalidPattern(f"bit {bit + 1} claimed by two slices")
                st._slice_of_bit[bit] = j
                st._bit_of_slice[j] = bit
                st._unmapped &= ~(1 << bit)
                if w % 2:
                    st._stored |= 1 << bit
        st._empty.reverse()
        return st

    def copy(self) -> CodecState:
        other = CodecState.__new__(CodecState)
        other.__dict__.update(self.__dict__)
        other._levels = self._levels[:]
        other._weights = self._weights[:]
        other._slice_of_bit = self._slice_of_bit[:]
        other._bit_of_slice = self._bit_of_slice[:]
        other._empty = self._empty[:]
        return other

    # -- views -------------------------------------------------------------

    @property
    def k(self) -> int:
        return self._k

    @property
    def m(self) -> int:
        return self._m

    @property
    def stored_mask(self) -> int:
        return self._stored

    @property
    def slices(self) -> list[tuple[int, ...]]:
        k = self._k
        return [tuple(self._levels[j * k:(j + 1) * k]) for j in range(self._m)]

    @property
    def bit_to_slice(self) -> dict[int, int]:
        return {i + 1: j + 1 for i, j in enumerate(self._slice_of_bit) if j >= 0}

    def rebuild_map(self) -> dict[int, int]:
        """Recover the bit-to-slice map from raw levels alone."""
        out = {}
        for j, row in enumerate(self.slices):
            bit = slice_index(row, self.params.q)
            if bit is not None:
                out[bit] = j + 1
        return out

    def decode(self) -> BitVector:
        return mask_to_bits(self._stored, self._k)

    def decode_from_cells(self) -> BitVector:
        """Apply the decoding map directly to the raw slices, ignoring caches."""
        q = self.params.q
        bits = [0] * self._k
        for row in self.slices:
            bit = slice_index(row, q)
            if bit is not None:
                bits[bit - 1] = sum(row) % 2
        return tuple(bits)

    def used_levels(self) -> int:
        return self._used

    def unused_levels(self) -> int:
        return self._m * self._cap - self._used

    @property
    def unmapped_bits(self) -> int:
        return self._unmapped.bit_count()

    @property
    def empty_slices(self) -> int:
        return len(self._empty)

    def diagnostics(self, exhausted: bool = True) -> EraseDiagnostics:
        return EraseDiagnostics(
            unmapped_bits=self._unmapped.bit_count(),
            empty_slices=len(self._empty),
            unused_levels=self._m * self._cap - self._used,
            exhausted=exhausted,
        )

    # -- writing -----------------------------------------------------------

    def can_store(self, target: int) -> bool:
        """Whether the stored word can become ``target`` without erasure."""
        flip = self._stored ^ target
        return (flip & self._unmapped).bit_count() <= len(self._empty)

    def store(self, target: int) -> int:
        """Change the stored word to ``target``; return the data-cell cost.

        The caller must have checked :meth:`can_store`. Returns 0 when the
        word is already stored.
        """
        flip = self._stored ^ target
        cost = flip.bit_count()
        k, top, cap = self._k, self._top, self._cap
        levels, weights = self._levels, self._weights
        slice_of_bit, bit_of_slice = self._slice_of_bit, self._bit_of_slice
        f = flip
        while f:
            low = f & -f
            f ^= low
            i = low.bit_length() - 1
            j = slice_of_bit[i]
            if j < 0:
                j = self._empty.pop()
                slice_of_bit[i] = j
                bit_of_slice[j] = i
                self._unmapped &= ~low
            w = weights[j]
            # the slice fills cyclically from cell i, so w // (q-1) cells are already full
            levels[j * k + (i + w // top) % k] += 1
            w += 1
            weights[j] = w
            if w == cap:
                slice_of_bit[i] = -1
                bit_of_slice[j] = -1
                self._unmapped |= low
        self._stored = target
        self._used += cost
        return cost

    def write(self, new_data: Sequence[int] | int) -> WriteOutcome:
        """Store ``new_data`` atomically, or report that erasure is needed.

        Empty slices go to unmapped bits in ascending order. If the write
        does not fit, nothing changes.
        """
        target = _as_mask(new_data, self._k)
        if target == self._stored:
            raise SameData("new data equals stored data")
        if not self.can_store(target):
            return WriteOutcome(WriteKind.ERASE_REQUIRED, diagnostics=self.diagnostics())
        return WriteOutcome(WriteKind.APPLIED, data_cell_changes=self.store(target))

    def erase(self) -> CodecState:
        self._reset()
        self.erase_count += 1
        return self

    # -- integrity and text form ---------------------------------------------

    def check_invariants(self) -> None:
        """Raise :class:`IlifcError` if caches disagree with the raw cells."""
        q = self.params.q
        rebuilt = self.rebuild_map()
        if rebuilt != self.bit_to_slice:
            raise IlifcError(f"map {self.bit_to_slice} != rebuilt {rebuilt}")
        if self.decode_from_cells() != self.decode():
            raise IlifcError("cached data differs from decoded cells")
        rows = self.slices
        if [sum(r) for r in rows] != self._weights or sum(self._weights) != self._used:
            raise IlifcError("weight cache out of sync")
        empties = sorted(j for j, r in enumerate(rows) if slice_classify(r, q) is SliceClass.EMPTY)
        if sorted(self._empty) != empties:
            raise IlifcError("empty-slice cache out of sync")

    def cell_levels(self) -> list[int]:
        """Levels of the n - r data-side cells, leftover cells included."""
        return self._levels + [0] * self.params.leftover

    def to_text(self) -> str:
        return dump_text(self.params, (), self.cell_levels())

    @classmethod
    def from_text(cls, text: str) -> CodecState:
        params, inversion, data = parse_text(text)
        if params.r:
            raise InvalidParams("state has inversion cells; load it with IilifcState.from_text")
        return cls.from_levels(params, _rows(params, data))

    def __repr__(self) -> str:
        return f"CodecState({self.params}, data={self.decode()})"


# Text form: one header line then the n cell levels, inversion cells first.
#   ILIFC n=<n> k=<k> q=<q> r=<r>
#   <b_1 .. b_r> <slice 1 cells> .. <slice m cells> <leftover cells>

def dump_text(params: CodeParams, inversion: Sequence[int], data_cells: Sequence[int]) -> str:
    cells = list(inversion) + list(data_cells)
    if len(inversion) != params.r or len(cells) != params.n:
        raise InvalidParams("cell count does not match params")
    header = f"ILIFC n={params.n} k={params.k} q={params.q} r={params.r}"
    return header + "\n" + " ".join(str(c) for c in cells) + "\n"


def parse_text(text: str) -> tuple[CodeParams, list[int], list[int]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2 or not lines[0].startswith("ILIFC "):
        raise InvalidParams("expected a header line and a levels line")
    fields = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
    try:
        params = CodeParams(int(fields["n"]), int(fields["k"]), int(fields["q"]), int(fields["r"]))
    except KeyError as exc:
        raise InvalidParams(f"header is missing {exc}") from None
    cells = [int(tok) for tok in lines[1].split()]
    if len(cells) != params.n:
        raise InvalidParams(f"expected {params.n} levels, got {len(cells)}")
    if any(not 0 <= c < params.q for c in cells):
        raise InvalidParams("level outside 0..q-1")
    inversion, data = cells[:params.r], cells[params.r:]
    if any(data[params.m * params.k:]):
        raise InvalidParams("leftover cells must stay at level 0")
    return params, inversion, data


def _rows(params: CodeParams, data: Sequence[int]) -> list[list[int]]:
    k = params.k
    return [list(data[j * k:(j + 1) * k]) for j in range(params.m)]
