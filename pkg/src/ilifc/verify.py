"""Brute-force oracles for the combinatorial claims, at small sizes.

None of these reuse the closed forms they are checked against: mode
choice is compared with explicit cost enumeration, erasure conditions with
a search over every next data word, and write counts with an exhaustive
adversarial game search.
"""
from __future__ import annotations

import itertools
import json
import random
import sys
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import bounds
from .errors import LengthTooSmall, StateSpaceTooLarge, UnrealizableOccupancy
from .iilifc import IilifcState, WriteStrategy, choose_mode
from .params import CodeParams
from .slices import slice_increment

SCHEMA_VERSION = 1


def _hamming(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(1 for x, y in zip(a, b) if x != y)


def oracle_mode_rule(k: int) -> bool:
    """Check :func:`choose_mode` against explicit costs of both plans.

    Keeping the mode costs the Hamming distance of the data words;
    switching costs the distance to the complemented word plus one
    inversion level. Ties must keep the mode.
    """
    words = list(itertools.product((0, 1), repeat=k))
    for v in words:
        for w in words:
            if v == w:
                continue
            keep = _hamming(v, w)
            switch = _hamming(v, tuple(1 - b for b in w)) + 1
            want_invert = switch < keep
            got = choose_mode(v, w, k, exhausted=False)
            if got.invert != want_invert or got.predicted_total != min(keep, switch):
                return False
            if choose_mode(v, w, k, exhausted=True).invert:
                return False
    return True


def oracle_delta(k: int) -> int:
    """Largest data-cell cost over all distances when the cheaper mode is used."""
    best = 0
    for d in range(1, k + 1):
        cost = d if 2 * d <= k + 1 else k - d
        best = max(best, cost)
    return best


# -- erasure condition -------------------------------------------------------

def _active_slice(k: int, q: int, bit: int, weight: int) -> tuple[int, ...]:
    levels = (0,) * k
    for _ in range(weight):
        levels = slice_increment(levels, q, bit)
    return levels


def build_occupancy_state(
    k: int,
    q: int,
    m: int,
    unmapped: int,
    empty: int,
    *,
    r: int = 2,
    mode: int = 0,
    rng: Optional[random.Random] = None,
) -> IilifcState:
    """An I-ILIFC state with the given counts of unmapped bits and empty slices.

    Active slices get weight 1 unless ``rng`` is given, in which case the
    weights, the choice of unmapped bits and the slice order are random.
    The inversion cells are left non-exhausted, in the requested mode.
    """
    mapped = k - unmapped
    full = m - empty - mapped
    if not 0 <= unmapped <= k or empty < 0 or full < 0:
        raise UnrealizableOccupancy(
            f"k={k}, m={m}: unmapped={unmapped}, empty={empty} leaves {full} full slices"
        )
    if r * (q - 1) < 2:
        raise UnrealizableOccupancy("need room for a mode change in the inversion cells")
    cap = k * (q - 1)
    bits = list(range(1, k + 1))
    if rng is not None:
        rng.shuffle(bits)
    rows = []
    for bit in sorted(bits[:mapped]):
        w = rng.randint(1, cap - 1) if rng is not None else 1
        rows.append(_active_slice(k, q, bit, w))
    rows += [(q - 1,) * k] * full + [(0,) * k] * empty
    if rng is not None:
        rng.shuffle(rows)
    inversion = [0] * r
    if mode:
        inversion[0] = 1
    params = CodeParams(m * k + r, k, q, r)
    return IilifcState.from_levels(params, inversion, rows)


def erasure_possible(state: IilifcState, strategy: WriteStrategy) -> bool:
    """Whether some next data word forces erasure, by trying every word."""
    k = state.k
    cur = state.current_mask
    for nxt in range(1 << k):
        if nxt == cur:
            continue
        trial = state.copy()
        if not trial.write_mask(nxt, strategy).applied:
            return True
    return False


def oracle_erasure_condition(
    k: int,
    q: int,
    occupancy: tuple[int, int, int],
    strategy: WriteStrategy,
    *,
    random_passes: int = 1,
    seed: int = 0,
) -> bool:
    """Compare exhaustive erasure search with the closed-form condition.

    ``occupancy`` is ``(m, unmapped_bits, empty_slices)``. Both storing
    modes are tried, with unit active weights and then ``random_passes``
    random realisations.
    """
    m, unmapped, empty = occupancy
    predicted = bounds.erasure_condition(unmapped, empty, k, strategy)
    rng = random.Random(seed)
    for mode in (0, 1):
        variants = [None] + [rng for _ in range(random_passes)]
        for source in variants:
            state = build_occupancy_state(k, q, m, unmapped, empty, mode=mode, rng=source)
            if state.data.unmapped_bits != unmapped or state.data.empty_slices != empty:
                raise AssertionError("occupancy construction is off")
            if erasure_possible(state, strategy) != predicted:
                return False
    return True


def realizable_occupancies(k: int, m: int) -> list[tuple[int, int]]:
    return [(a1, a2) for a1 in range(k + 1) for a2 in range(m - (k - a1) + 1)]


# -- exhaustive worst case ------------------------------------------------------

def oracle_worstcase_small(
    n: int,
    k: int,
    q: int,
    r: int,
    strategy: WriteStrategy = WriteStrategy.USUAL_ONLY,
    max_states: int = 2_000_000,
) -> int:
    """Exact minimum, over all data sequences, of writes before erasure.

    The adversary sees the whole state before choosing each next word.
    """
    params = CodeParams(n, k, q, r)
    memo: dict[tuple, int] = {}
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10_000))

    def key(st: IilifcState) -> tuple:
        return (st.inversion_levels, tuple(st.data.cell_levels()))

    def solve(st: IilifcState) -> int:
        kk = key(st)
        hit = memo.get(kk)
        if hit is not None:
            return hit
        if len(memo) >= max_states:
            raise StateSpaceTooLarge(f"more than {max_states} states for {params}")
        best = None
        cur = st.current_mask
        for nxt in range(1 << k):
            if nxt == cur:
                continue
            trial = st.copy()
            if not trial.write_mask(nxt, strategy).applied:
                best = 0
                break
            val = 1 + solve(trial)
            if best is None or val < best:
                best = val
        memo[kk] = best
        return best

    try:
        return solve(IilifcState(params))
    finally:
        sys.setrecursionlimit(limit)


# -- certificates ---------------------------------------------------------------

@dataclass
class Claim:
    name: str
    params: dict
    passed: bool
    detail: str = ""


@dataclass
class Certificate:
    scope: str
    claims: list[Claim] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def add(self, name: str, params: dict, passed: bool, detail: str = "") -> None:
        self.claims.append(Claim(name, params, bool(passed), detail))

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "scope": self.scope,
                "passed": self.passed,
                "claims": [asdict(c) for c in self.claims],
            },
            indent=indent,
        )


def worstcase_checks(n: int, k: int, q: int, r: int, strategy: WriteStrategy) -> tuple[int, list[str]]:
    """Run the game search and list every applicable bound it violates."""
    worst = oracle_worstcase_small(n, k, q, r, strategy)
    failures = []
    if r == 0 and k * worst > n * (q - 1):
        failures.append(f"k*worst={k * worst} > n(q-1)={n * (q - 1)}")
    if r == 0 and worst > bounds.t_ub(n, k, q):
        failures.append(f"worst={worst} > t_ub")
    if bounds.U1(r, n, k, q) > 0 and worst < 1:
        failures.append("first write not guaranteed")
    try:
        if strategy is WriteStrategy.USUAL_ONLY and r >= bounds.r1_star(n, k, q):
            need = bounds.t1(r, n, k, q)
            if worst < need:
                failures.append(f"worst={worst} < t1={need}")
        if strategy is WriteStrategy.ALLOW_UNUSUAL and r >= bounds.r2_star(n, k, q):
            need = bounds.t1(r, n, k, q) + bounds.t2(r, n, k, q)
            if worst < need:
                failures.append(f"worst={worst} < t1+t2={need}")
    except LengthTooSmall:
        pass
    return worst, failures


# (n, k, q, r, strategy) toy instances for the game search
WORSTCASE_INSTANCES = (
    (4, 2, 2, 0, WriteStrategy.USUAL_ONLY),
    (6, 2, 3, 0, WriteStrategy.USUAL_ONLY),
    (10, 2, 2, 5, WriteStrategy.USUAL_ONLY),
    (9, 2, 3, 4, WriteStrategy.USUAL_ONLY),
    (12, 2, 2, 7, WriteStrategy.ALLOW_UNUSUAL),
    (11, 2, 3, 6, WriteStrategy.ALLOW_UNUSUAL),
)


def run_suite(scope: str = "quick") -> Certificate:
    """Run the oracle suite. ``quick`` keeps k <= 5; ``full`` adds the game searches."""
    if scope not in ("quick", "full"):
        raise ValueError(f"scope must be 'quick' or 'full', got {scope!r}")
    cert = Certificate(scope)
    mode_ks = range(2, 6) if scope == "quick" else range(2, 11)
    for k in mode_ks:
        cert.add("mode_rule", {"k": k}, oracle_mode_rule(k))
    for k in range(2, 65):
        got, want = bounds.delta(k), oracle_delta(k)
        cert.add("delta", {"k": k}, got == want, f"delta={got}, enumeration={want}")
    for k, q in ((2, 2), (2, 3), (4, 2), (4, 3), (5, 3)):
        for m in range(k, k + 4):
            for a1, a2 in realizable_occupancies(k, m):
                for strategy in WriteStrategy:
                    ok = oracle_erasure_condition(k, q, (m, a1, a2), strategy)
                    cert.add(
                        "erasure_condition",
                        {"k": k, "q": q, "m": m, "unmapped": a1, "empty": a2, "strategy": strategy.value},
                        ok,
                    )
    if scope == "full":
        for n, k, q, r, strategy in WORSTCASE_INSTANCES:
            worst, failures = worstcase_checks(n, k, q, r, strategy)
            cert.add(
                "worst_case",
                {"n": n, "k": k, "q": q, "r": r, "strategy": strategy.value},
                not failures,
                f"worst={worst}" + ("; " + "; ".join(failures) if failures else ""),
            )
    return cert
