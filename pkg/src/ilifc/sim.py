"""Monte-Carlo write-count simulation between block erasures.

Each epoch starts from an erased block holding the all-zero word and
applies writes drawn from a :class:`Workload` until one cannot be stored;
that write is not counted. Epoch ``e`` of a run with seed ``s`` uses its
own :class:`random.Random` (Mersenne Twister) seeded with the first 8
bytes of ``blake2b(f"{s}:{e}")``, so epochs are independent of order and
every point of an r-sweep sees the same data streams.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
import random
import statistics
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, TextIO, Union

from . import bounds
from .codec import CodecState, EraseDiagnostics, WriteKind
from .errors import InvalidParams, InvalidR
from .iilifc import IilifcState, WriteStrategy
from .params import CodeParams, admissible_r

PRNG_NAME = "mt19937-blake2b-epoch"
CSV_COLUMNS = (
    "n", "k", "q", "r", "strategy", "workload", "seed", "epochs",
    "mean_writes", "min_writes", "max_writes",
)
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Workload:
    """How the next data word is drawn from the current one.

    ``uniform`` picks uniformly among the 2^k - 1 other words,
    ``alternating`` writes the complement (0, 1, 0, 1, ... from the zero
    word) and ``distance:<d>`` flips ``d`` uniformly chosen bits.
    """

    kind: str = "uniform"
    distance: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("uniform", "alternating", "distance"):
            raise InvalidParams(f"unknown workload {self.kind!r}")
        if self.kind == "distance" and self.distance < 1:
            raise InvalidParams("distance workload needs d >= 1")

    @classmethod
    def parse(cls, text: str) -> Workload:
        if text.startswith("distance:"):
            return cls("distance", int(text.split(":", 1)[1]))
        return cls(text)

    def __str__(self) -> str:
        return f"distance:{self.distance}" if self.kind == "distance" else self.kind

    def generator(self, k: int, rng: random.Random) -> Callable[[int], int]:
        full = (1 << k) - 1
        if self.kind == "alternating":
            return lambda cur: cur ^ full
        if self.kind == "distance":
            d = self.distance
            if d > k:
                raise InvalidParams(f"distance {d} exceeds k={k}")
            positions = range(k)

            def flip_d(cur: int) -> int:
                for i in rng.sample(positions, d):
                    cur ^= 1 << i
                return cur

            return flip_d
        getrandbits = rng.getrandbits

        def uniform(cur: int) -> int:
            nxt = getrandbits(k)
            while nxt == cur:
                nxt = getrandbits(k)
            return nxt

        return uniform


UNIFORM = Workload("uniform")
ALTERNATING = Workload("alternating")


def epoch_seed(seed: int, epoch: int) -> int:
    digest = hashlib.blake2b(f"{seed}:{epoch}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def epoch_rng(seed: int, epoch: int) -> random.Random:
    return random.Random(epoch_seed(seed, epoch))


@dataclass(frozen=True)
class EpochResult:
    writes: int
    diagnostics: EraseDiagnostics
    used_levels: int


Codec = Union[CodecState, IilifcState]


def run_epoch(
    codec: Codec,
    workload: Workload,
    rng: random.Random,
    strategy: WriteStrategy = WriteStrategy.USUAL_ONLY,
) -> EpochResult:
    """Write until erasure is required, record the erasure state, then erase."""
    k = codec.k
    draw = workload.generator(k, rng)
    erase_required = WriteKind.ERASE_REQUIRED
    if isinstance(codec, IilifcState):
        cur = codec.current_mask
        write = codec.write_mask
        step = lambda m: write(m, strategy)  # noqa: E731
    else:
        cur = codec.stored_mask
        step = codec.write
    count = 0
    while True:
        nxt = draw(cur)
        out = step(nxt)
        if out.kind is erase_required:
            break
        count += 1
        cur = nxt
    result = EpochResult(count, out.diagnostics, codec.used_levels())
    codec.erase()
    return result


@dataclass
class SimResult:
    n: int
    k: int
    q: int
    r: int
    strategy: str
    workload: str
    seed: int
    epochs: int
    writes_per_epoch: list[int]
    diagnostics: list[EraseDiagnostics] = field(repr=False, default_factory=list)
    prng: str = PRNG_NAME

    @property
    def mean(self) -> float:
        return statistics.fmean(self.writes_per_epoch)

    @property
    def min(self) -> int:
        return min(self.writes_per_epoch)

    @property
    def max(self) -> int:
        return max(self.writes_per_epoch)

    @property
    def stdev(self) -> float:
        if len(self.writes_per_epoch) < 2:
            return 0.0
        return statistics.stdev(self.writes_per_epoch)

    @property
    def stderr(self) -> float:
        return self.stdev / math.sqrt(len(self.writes_per_epoch))

    def csv_row(self) -> dict:
        return {
            "n": self.n, "k": self.k, "q": self.q, "r": self.r,
            "strategy": self.strategy, "workload": self.workload,
            "seed": self.seed, "epochs": self.epochs,
            "mean_writes": f"{self.mean:.6f}",
            "min_writes": self.min, "max_writes": self.max,
        }

    def to_dict(self, include_epochs: bool = False) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "n": self.n, "k": self.k, "q": self.q, "r": self.r,
            "strategy": self.strategy, "workload": self.workload,
            "seed": self.seed, "epochs": self.epochs, "prng": self.prng,
            "mean_writes": self.mean, "min_writes": self.min, "max_writes": self.max,
            "stdev_writes": self.stdev, "stderr_writes": self.stderr,
        }
        if include_epochs:
            out["writes_per_epoch"] = list(self.writes_per_epoch)
            out["erasure_diagnostics"] = [
                {"unmapped_bits": d.unmapped_bits, "empty_slices": d.empty_slices,
                 "unused_levels": d.unused_levels, "exhausted": d.exhausted}
                for d in self.diagnostics
            ]
        return out


def run_average(
    params: CodeParams,
    workload: Workload = UNIFORM,
    epochs: int = 10_000,
    seed: int = 0,
    strategy: WriteStrategy = WriteStrategy.USUAL_ONLY,
) -> SimResult:
    if epochs < 1:
        raise InvalidParams("epochs must be >= 1")
    state = IilifcState(params)
    writes, diags = [], []
    for e in range(epochs):
        res = run_epoch(state, workload, epoch_rng(seed, e), strategy)
        writes.append(res.writes)
        diags.append(res.diagnostics)
    return SimResult(
        params.n, params.k, params.q, params.r, strategy.value, str(workload),
        seed, epochs, writes, diags,
    )


def _run_point(args: tuple) -> SimResult:
    params, workload, epochs, seed, strategy = args
    return run_average(params, workload, epochs, seed, strategy)


def sweep_r(
    n: int,
    k: int,
    q: int,
    workload: Workload = UNIFORM,
    epochs: int = 10_000,
    seed: int = 0,
    strategy: WriteStrategy = WriteStrategy.USUAL_ONLY,
    jobs: int = 1,
    r_values: Optional[Iterable[int]] = None,
) -> list[SimResult]:
    """Simulate every admissible r (``n - r >= k^2`` and ``k | n - r``), r = 0 included."""
    allowed = admissible_r(n, k, q)
    rs = allowed if r_values is None else sorted(set(r_values))
    for r in rs:
        if r not in allowed:
            raise InvalidR(f"r={r} is not admissible for n={n}, k={k}")
    tasks = [(CodeParams(n, k, q, r), workload, epochs, seed, strategy) for r in rs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_point, tasks))
    else:
        results = [_run_point(t) for t in tasks]
    return sorted(results, key=lambda res: res.r)


def best_r(results: Sequence[SimResult]) -> int:
    """The r with the highest mean; ties go to the smaller r."""
    return max(results, key=lambda res: (res.mean, -res.r)).r


def write_csv(results: Iterable[SimResult], out: Optional[TextIO] = None) -> str:
    buf = out if out is not None else io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for res in results:
        writer.writerow(res.csv_row())
    return buf.getvalue() if out is None else ""


# -- bound audit ----------------------------------------------------------------

@dataclass
class AuditReport:
    params: CodeParams
    strategy: WriteStrategy
    epochs: int
    guaranteed_writes: int
    used_threshold: int
    max_unused: int
    min_writes: Optional[int]
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def bound_audit(
    params: CodeParams,
    strategy: WriteStrategy = WriteStrategy.USUAL_ONLY,
    trials: int = 1000,
    workloads: Sequence[Workload] = (UNIFORM,),
    seed: int = 0,
) -> AuditReport:
    """Run ``trials`` epochs per workload and check the analytic guarantees.

    At every erasure: the write count reaches the guaranteed minimum, and
    while the inversion cells are not exhausted the used levels have reached
    the no-erasure threshold and the unused levels stay under the maximum.
    """
    n, k, q, r = params.n, params.k, params.q, params.r
    if strategy is WriteStrategy.USUAL_ONLY:
        r_min = bounds.r1_star(n, k, q)
        guaranteed = bounds.t1(r, n, k, q) if r >= r_min else None
        threshold = bounds.U1(r, n, k, q)
    else:
        r_min = bounds.r2_star(n, k, q)
        guaranteed = bounds.t1(r, n, k, q) + bounds.t2(r, n, k, q) if r >= r_min else None
        threshold = bounds.U2(r, n, k, q)
    if guaranteed is None:
        raise InvalidR(f"r={r} is below the required minimum {r_min}")
    limit = bounds.max_unused(k, q, strategy)
    report = AuditReport(params, strategy, trials * len(workloads), guaranteed, threshold, limit, None)
    state = IilifcState(params)
    lows = []
    for w_index, workload in enumerate(workloads):
        for e in range(trials):
            res = run_epoch(state, workload, epoch_rng(seed + w_index, e), strategy)
            lows.append(res.writes)
            diag = res.diagnostics
            tag = f"{workload} epoch {e}"
            if res.writes < guaranteed:
                report.violations.append(f"{tag}: {res.writes} writes < guaranteed {guaranteed}")
            if not diag.exhausted:
                if res.used_levels < threshold:
                    report.violations.append(f"{tag}: erasure at used={res.used_levels} < {threshold}")
                if diag.unused_levels > limit:
                    report.violations.append(f"{tag}: unused={diag.unused_levels} > {limit}")
    report.min_writes = min(lows) if lows else None
    return report
