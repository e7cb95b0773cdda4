"""ILIFC with inversion cells: storing modes and mode selection.

The parity of the inversion-cell weight is the storing mode. In normal
mode the slices hold the data word; in inverted mode they hold its
complement. Each write picks the mode that changes the fewest cell levels
and, under :attr:`WriteStrategy.ALLOW_UNUSUAL`, falls back to the other
mode before giving up and asking for an erasure.
"""
from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass

from .codec import (
    BitVector,
    CodecState,
    EraseDiagnostics,
    WriteKind,
    WriteOutcome,
    _as_mask,
    _rows,
    dump_text,
    mask_to_bits,
    parse_text,
)
from .errors import Exhausted, InvalidParams, SameData
from .params import CodeParams


class WriteStrategy(enum.Enum):
    USUAL_ONLY = "usual"
    ALLOW_UNUSUAL = "unusual"


@dataclass(frozen=True)
class ModeDecision:
    invert: bool
    predicted_data_cost: int
    predicted_inversion_cost: int

    @property
    def predicted_total(self) -> int:
        return self.predicted_data_cost + self.predicted_inversion_cost


def _should_invert(d: int, k: int, exhausted: bool) -> bool:
    # strict: on a tie 2d == k+1 the mode is kept
    return not exhausted and 2 * d > k + 1


def choose_mode(current: Sequence[int], nxt: Sequence[int], k: int, exhausted: bool) -> ModeDecision:
    """Pick the storing mode that minimises the total cost of a write."""
    if len(current) != k or len(nxt) != k:
        raise ValueError(f"expected two {k}-bit vectors")
    d = sum(a != b for a, b in zip(current, nxt))
    if d == 0:
        raise SameData("next data equals current data")
    if _should_invert(d, k, exhausted):
        return ModeDecision(True, k - d, 1)
    return ModeDecision(False, d, 0)


def increment_inversion(levels: Sequence[int], q: int) -> tuple[int, ...]:
    """Raise the lowest-index non-full inversion cell by one level."""
    out = list(levels)
    for i, v in enumerate(out):
        if v < q - 1:
            out[i] = v + 1
            return tuple(out)
    raise Exhausted(f"inversion cells {tuple(levels)} are exhausted")


class IilifcState:
    """Inversion cells plus an ILIFC data block, holding one k-bit word."""

    def __init__(self, params: CodeParams):
        self.params = params
        self.data = CodecState(params)
        self._k = params.k
        self._all = (1 << params.k) - 1
        self._inv_cap = params.r * (params.q - 1)
        self._reset_inversion()

    def _reset_inversion(self) -> None:
        self._inv = [0] * self.params.r
        self._inv_weight = 0
        self._inv_next = 0  # lowest non-full inversion cell
        self._current = 0

    @classmethod
    def from_levels(
        cls, params: CodeParams, inversion: Sequence[int], slices: Sequence[Sequence[int]]
    ) -> IilifcState:
        st = cls(params)
        if len(inversion) != params.r or any(not 0 <= b < params.q for b in inversion):
            raise InvalidParams(f"bad inversion levels {tuple(inversion)}")
        st.data = CodecState.from_levels(params, slices)
        st._inv = list(inversion)
        st._inv_weight = sum(inversion)
        st._inv_next = next((i for i, b in enumerate(inversion) if b < params.q - 1), params.r)
        st._current = st.data.stored_mask ^ (st._all if st.mode else 0)
        return st

    def copy(self) -> IilifcState:
        other = IilifcState.__new__(IilifcState)
        other.__dict__.update(self.__dict__)
        other.data = self.data.copy()
        other._inv = self._inv[:]
        return other

    # -- views -------------------------------------------------------------

    @property
    def k(self) -> int:
        return self._k

    @property
    def inversion_levels(self) -> tuple[int, ...]:
        return tuple(self._inv)

    @property
    def inversion_weight(self) -> int:
        return self._inv_weight

    @property
    def mode(self) -> int:
        """0 for normal mode, 1 for inverted mode."""
        return self._inv_weight & 1

    @property
    def exhausted(self) -> bool:
        return self._inv_weight == self._inv_cap

    @property
    def current_mask(self) -> int:
        return self._current

    @property
    def erase_count(self) -> int:
        return self.data.erase_count

    def decode(self) -> BitVector:
        mask = self.data.stored_mask ^ (self._all if self.mode else 0)
        return mask_to_bits(mask, self._k)

    def used_levels(self) -> int:
        return self.data.used_levels()

    def unused_levels(self) -> int:
        return self.data.unused_levels()

    def diagnostics(self) -> EraseDiagnostics:
        return self.data.diagnostics(exhausted=self.exhausted)

    # -- writing -----------------------------------------------------------

    def _bump_inversion(self) -> None:
        i = self._inv_next
        inv, top = self._inv, self.params.q - 1
        inv[i] += 1
        self._inv_weight += 1
        while i < len(inv) and inv[i] == top:
            i += 1
        self._inv_next = i

    def _apply(self, target: int, invert: bool, nxt: int, unusual: bool) -> WriteOutcome:
        cost = self.data.store(target)
        if invert:
            self._bump_inversion()
        self._current = nxt
        return WriteOutcome(
            WriteKind.APPLIED,
            data_cell_changes=cost,
            inversion_cell_changes=int(invert),
            inverted=invert,
            unusual=unusual,
        )

    def write_mask(self, nxt: int, strategy: WriteStrategy = WriteStrategy.USUAL_ONLY) -> WriteOutcome:
        current = self._current
        diff = nxt ^ current
        if not diff:
            raise SameData("next data equals current data")
        exhausted = self._inv_weight == self._inv_cap
        keep = nxt ^ (self._all if self._inv_weight & 1 else 0)
        invert = _should_invert(diff.bit_count(), self._k, exhausted)
        primary = keep ^ self._all if invert else keep
        data = self.data
        if data.can_store(primary):
            return self._apply(primary, invert, nxt, unusual=False)
        # with exhausted cells the primary is a keep-mode write and no alternative exists
        if strategy is WriteStrategy.ALLOW_UNUSUAL and not exhausted:
            alt = keep if invert else keep ^ self._all
            if data.can_store(alt):
                return self._apply(alt, not invert, nxt, unusual=True)
        return WriteOutcome(WriteKind.ERASE_REQUIRED, diagnostics=self.diagnostics())

    def write(
        self, nxt: Sequence[int] | int, strategy: WriteStrategy = WriteStrategy.USUAL_ONLY
    ) -> WriteOutcome:
        """Store ``nxt``; returns an erase-required outcome without mutating on failure."""
        return self.write_mask(_as_mask(nxt, self._k), strategy)

    def erase(self) -> IilifcState:
        self.data.erase()
        self._reset_inversion()
        return self

    # -- integrity and text form ---------------------------------------------

    def check_invariants(self) -> None:
        self.data.check_invariants()
        if sum(self._inv) != self._inv_weight:
            raise AssertionError("inversion weight cache out of sync")
        if self.decode() != mask_to_bits(self._current, self._k):
            raise AssertionError("current data differs from decoded cells")

    def to_text(self) -> str:
        return dump_text(self.params, self._inv, self.data.cell_levels())

    @classmethod
    def from_text(cls, text: str) -> IilifcState:
        params, inversion, data = parse_text(text)
        return cls.from_levels(params, inversion, _rows(params, data))

    def __repr__(self) -> str:
        return f"IilifcState({self.params}, mode={self.mode}, data={self.decode()})"


def erasure_diagnostics(st: IilifcState | CodecState) -> EraseDiagnostics:
    """Bits without a slice, empty slices, unused levels and exhaustion."""
    return st.diagnostics()
