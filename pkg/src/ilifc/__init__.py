"""Index-less indexed flash codes with inversion cells.

Codecs (:class:`CodecState`, :class:`IilifcState`), exact bounds
(:mod:`ilifc.bounds`), simulation (:mod:`ilifc.sim`) and brute-force
oracles (:mod:`ilifc.verify`).
"""
from .codec import CodecState, EraseDiagnostics, WriteKind, WriteOutcome, bits_to_mask, mask_to_bits
from .errors import (
    Exhausted,
    FullSlice,
    IlifcError,
    IndexMismatch,
    InvalidParams,
    InvalidPattern,
    InvalidR,
    LengthTooSmall,
    SameData,
    StateSpaceTooLarge,
    UnrealizableOccupancy,
)
from .iilifc import IilifcState, ModeDecision, WriteStrategy, choose_mode, erasure_diagnostics, increment_inversion
from .params import CodeParams, admissible_r
from .slices import SliceClass, slice_classify, slice_increment, slice_index, slice_validate

__version__ = "0.1.0"
