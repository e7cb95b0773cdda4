"""Closed-form write-count bounds and code-length thresholds.

Everything is exact: integers stay integers and every ratio is a
:class:`fractions.Fraction`. Floats appear only in display helpers.

Two families of bounds are provided. The first holds when only
cost-minimising ("usual") writes are used; the second also allows the
opposite-mode ("unusual") write before erasing. Each family has a minimal
inversion-cell budget (``r1_star``/``r2_star``), a guaranteed write count,
a lower bound on that count as a function of ``n``, and a threshold on
``n`` above which I-ILIFC beats plain ILIFC in the worst case.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

from .errors import InvalidR, LengthTooSmall
from .iilifc import WriteStrategy
from .params import check_base, delta_for

SCHEMA_VERSION = 1


def delta(k: int) -> int:
    return delta_for(k)


def t_ub(n: int, k: int, q: int) -> Fraction:
    """Upper bound n(q-1)/k on the worst-case write count of plain ILIFC."""
    return Fraction(n * (q - 1), k)


def _need_r(n: int, k: int, r: int) -> None:
    if r < 0 or n - r < k * k:
        raise InvalidR(f"r={r} leaves n-r={n - r} < k^2={k * k}")


# -- usual writes only ----------------------------------------------------------

def U1(r: int, n: int, k: int, q: int) -> int:
    """Used levels below which the next usual write never needs erasure."""
    _need_r(n, k, r)
    return ((n - r) // k - k + 1) * k * (q - 1) + k - delta(k)


def U1p(r: int, n: int, k: int, q: int) -> Fraction:
    """:func:`U1` with the slice count taken as the exact ratio (n-r)/k."""
    return (Fraction(n - r, k) - k + 1) * k * (q - 1) + k - delta(k)


def t1(r: int, n: int, k: int, q: int) -> int:
    return math.ceil(Fraction(U1(r, n, k, q), delta(k)))


def R1(n: int, k: int, q: int) -> Fraction:
    return (n - k * k + k + Fraction(k, q - 1)) / (delta(k) + 1)


def length_ok_1(n: int, k: int, q: int) -> bool:
    d = delta(k)
    return n >= k * k + (k + 1 + Fraction(k, q - 1)) / d + 1


def _r1_inequality(r: int, n: int, k: int, q: int) -> bool:
    return r * (q - 1) >= U1p(r, n, k, q) / delta(k) + 1


def _scan_min_r(pred, limit: int) -> Optional[int]:
    for r in range(0, limit + 1):
        if pred(r):
            return r
    return None


def r1_star(n: int, k: int, q: int) -> int:
    """Smallest inversion-cell count meeting the usual-write budget.

    Computed as the ceiling of :func:`R1` and cross-checked against a
    direct scan of the defining inequality.
    """
    check_base(n, k, q)
    if not length_ok_1(n, k, q):
        raise LengthTooSmall(f"n={n} is too short for the usual-write bound (k={k}, q={q})")
    closed = math.ceil(R1(n, k, q))
    scanned = _scan_min_r(lambda r: _r1_inequality(r, n, k, q), n)
    if closed != scanned:
        raise ArithmeticError(f"r1* closed form {closed} != scan {scanned}")
    return closed


def U_lb1(r: Fraction | int, n: int, k: int, q: int) -> Fraction:
    return (n - k * k - Fraction(r)) * (q - 1) + k - delta(k)


def _t_lb1_closed(n: int, k: int, q: int) -> Fraction:
    if k % 2 == 0:
        return 2 * (Fraction(n - k * k - 2, k + 2) - Fraction(1, k)) * (q - 1) + Fraction(2 * k, k + 2) - 1
    return 2 * Fraction(n - k * k - 3, k + 3) * (q - 1) + Fraction(2 * k, k + 3) - 1


def t_lb1_star(n: int, k: int, q: int) -> Fraction:
    """Lower bound on the worst-case write count at ``r1_star``."""
    closed = _t_lb1_closed(n, k, q)
    direct = U_lb1(R1(n, k, q) + 1, n, k, q) / delta(k)
    if closed != direct:
        raise ArithmeticError(f"t_lb1* closed form {closed} != U_lb1(R1+1)/delta {direct}")
    return closed


def p1(k: int, q: int) -> Optional[Fraction]:
    """Code-length threshold for the usual-write bound; None for k < 4."""
    if k < 4:
        return None
    if k % 2 == 0:
        return Fraction(2 * (k**3 + 3 * k + 2), k - 2) - Fraction(k, q - 1)
    return Fraction(2 * k * (k * k + 3), k - 3) - Fraction(k, q - 1)


# -- usual and unusual writes ---------------------------------------------------

def U2(r: int, n: int, k: int, q: int) -> int:
    _need_r(n, k, r)
    return ((n - r) // k - k + 2) * k * (q - 1) + k - 2


def U2p(r: int, n: int, k: int, q: int) -> Fraction:
    return (Fraction(n - r, k) - k + 2) * k * (q - 1) + k - 2


def t2(r: int, n: int, k: int, q: int) -> int:
    return math.ceil(Fraction(U2(r, n, k, q) - U1(r, n, k, q) - delta(k) + 1, k - 1))


def R2(n: int, k: int, q: int) -> Fraction:
    d = delta(k)
    extra = Fraction(k + d, q - 1) + Fraction(k * d, k - 1) - Fraction(d, (q - 1) * (k - 1))
    return (n - k * k + k + extra) / (d + 1)


def length_ok_2(n: int, k: int, q: int) -> bool:
    d = delta(k)
    extra = Fraction(k + d, q - 1) + Fraction(k * d, k - 1) - Fraction(d, (q - 1) * (k - 1))
    return n >= k * k + (k + extra) / d + Fraction(d + 1, d)


def _r2_inequality(r: int, n: int, k: int, q: int) -> bool:
    d = delta(k)
    u1, u2 = U1p(r, n, k, q), U2p(r, n, k, q)
    return r * (q - 1) >= u1 / d + (u2 - u1 - d + 1) / (k - 1) + 2


def r2_star(n: int, k: int, q: int) -> int:
    check_base(n, k, q)
    if not length_ok_2(n, k, q):
        raise LengthTooSmall(f"n={n} is too short for the unusual-write bound (k={k}, q={q})")
    closed = math.ceil(R2(n, k, q))
    scanned = _scan_min_r(lambda r: _r2_inequality(r, n, k, q), n)
    if closed != scanned:
        raise ArithmeticError(f"r2* closed form {closed} != scan {scanned}")
    return closed


def U_lb2(r: Fraction | int, n: int, k: int, q: int) -> Fraction:
    return (n - Fraction(r) - k * k + k) * (q - 1) + k - 2


def _t_lb2_closed(n: int, k: int, q: int) -> Fraction:
    if k % 2 == 0:
        inner = n - k * k + Fraction(k**3 - 6 * k**2 + 2 * k + 4, 2 * k * (k - 1))
        return Fraction(2, k + 2) * inner * (q - 1) + Fraction(k**2 - 6 * k + 4, (k - 1) * (k + 2))
    inner = n - k * k + Fraction(k**3 - 4 * k**2 + k + 6, 2 * (k + 1) * (k - 1))
    return Fraction(2, k + 3) * inner * (q - 1) + Fraction(k**2 - 7 * k + 4, (k + 3) * (k - 1))


def t_lb2_star(n: int, k: int, q: int) -> Fraction:
    closed = _t_lb2_closed(n, k, q)
    direct = U_lb1(R2(n, k, q) + 1, n, k, q) / delta(k) + Fraction(k * (q - 1) - 1, k - 1)
    if closed != direct:
        raise ArithmeticError(f"t_lb2* closed form {closed} != definition {direct}")
    return closed


def p2(k: int, q: int) -> Optional[Fraction]:
    if k < 4:
        return None
    if k % 2 == 0:
        den = (k - 1) * (k - 2)
        return Fraction(2 * k**4 - 3 * k**3 + 6 * k**2 - 2 * k - 4, den) - Fraction(
            k * (k**2 - 6 * k + 4), den * (q - 1)
        )
    return Fraction(k * (2 * k**4 - k**3 + 2 * k**2 - k - 6), (k + 1) * (k - 1) * (k - 3)) - Fraction(
        k * (k**2 - 7 * k + 4), (k - 1) * (k - 3) * (q - 1)
    )


def p_gap(k: int, q: int) -> Optional[Fraction]:
    """p1 - p2 from its own simplified closed form."""
    if k < 4:
        return None
    if k % 2 == 0:
        return Fraction(k**3 * (q - 1) - 3 * k**2 + 2 * k, (k - 1) * (k - 2) * (q - 1))
    num = (k**4 + 2 * k**3 + k**2) * (q - 1) - 3 * k**3 - 2 * k**2 + k
    return Fraction(num, (k + 1) * (k - 1) * (k - 3) * (q - 1))


# -- erasure conditions -----------------------------------------------------

def max_unused(k: int, q: int, strategy: WriteStrategy) -> int:
    """Most unused cell levels a block can have when erasure is forced."""
    if strategy is WriteStrategy.USUAL_ONLY:
        return (k - 1) * k * (q - 1) - k + delta(k)
    return (k - 2) * k * (q - 1) - k + 2


def erasure_condition(unmapped_bits: int, empty_slices: int, k: int, strategy: WriteStrategy) -> bool:
    """True iff some next data word forces erasure from this occupancy."""
    if strategy is WriteStrategy.USUAL_ONLY:
        return empty_slices < min(unmapped_bits, delta(k))
    return unmapped_bits // 2 > empty_slices


# -- report -------------------------------------------------------------------

@dataclass(frozen=True)
class BoundsReport:
    n: int
    k: int
    q: int
    delta: int
    t_ub: Fraction
    length_ok_1: bool
    R1: Optional[Fraction]
    r1_star: Optional[int]
    U1: Optional[int]
    U1p: Optional[Fraction]
    t1: Optional[int]
    U_lb1: Optional[Fraction]
    t_lb1_star: Optional[Fraction]
    p1: Optional[Fraction]
    length_ok_2: bool
    R2: Optional[Fraction]
    r2_star: Optional[int]
    U2: Optional[int]
    U2p: Optional[Fraction]
    t2: Optional[int]
    U_lb2: Optional[Fraction]
    t_lb2_star: Optional[Fraction]
    p2: Optional[Fraction]
    max_unused_usual: int
    max_unused_unusual: int

    @property
    def beats_ilifc_1(self) -> Optional[bool]:
        return None if self.p1 is None else self.n > self.p1

    @property
    def beats_ilifc_2(self) -> Optional[bool]:
        return None if self.p2 is None else self.n > self.p2

    def to_dict(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION}
        for key, value in asdict(self).items():
            out[key] = _jsonable(value)
        out["n_gt_p1"] = self.beats_ilifc_1
        out["n_gt_p2"] = self.beats_ilifc_2
        return out

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _jsonable(value):
    if isinstance(value, Fraction):
        return {"exact": f"{value.numerator}/{value.denominator}", "approx": float(value)}
    return value


def compute_bounds(n: int, k: int, q: int) -> BoundsReport:
    """Evaluate every bound for (n, k, q).

    The per-r quantities are reported at ``r1_star`` (U1, t1, U_lb1) and
    ``r2_star`` (U2, t2, U_lb2). Fields whose length condition fails, or
    thresholds with k < 4, are ``None``.
    """
    check_base(n, k, q)
    ok1, ok2 = length_ok_1(n, k, q), length_ok_2(n, k, q)
    r1 = r1_star(n, k, q) if ok1 else None
    r2 = r2_star(n, k, q) if ok2 else None
    return BoundsReport(
        n=n, k=k, q=q, delta=delta(k), t_ub=t_ub(n, k, q),
        length_ok_1=ok1,
        R1=R1(n, k, q) if ok1 else None,
        r1_star=r1,
        U1=U1(r1, n, k, q) if ok1 else None,
        U1p=U1p(r1, n, k, q) if ok1 else None,
        t1=t1(r1, n, k, q) if ok1 else None,
        U_lb1=U_lb1(r1, n, k, q) if ok1 else None,
        t_lb1_star=t_lb1_star(n, k, q) if ok1 else None,
        p1=p1(k, q),
        length_ok_2=ok2,
        R2=R2(n, k, q) if ok2 else None,
        r2_star=r2,
        U2=U2(r2, n, k, q) if ok2 else None,
        U2p=U2p(r2, n, k, q) if ok2 else None,
        t2=t2(r2, n, k, q) if ok2 else None,
        U_lb2=U_lb2(r2, n, k, q) if ok2 else None,
        t_lb2_star=t_lb2_star(n, k, q) if ok2 else None,
        p2=p2(k, q),
        max_unused_usual=max_unused(k, q, WriteStrategy.USUAL_ONLY),
        max_unused_unusual=max_unused(k, q, WriteStrategy.ALLOW_UNUSUAL),
    )
