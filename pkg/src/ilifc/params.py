from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParams


def delta_for(k: int) -> int:
    """Largest data-cell cost of a cost-minimising write: k/2 (even k) or (k+1)/2."""
    if k < 2:
        raise InvalidParams(f"k must be >= 2, got {k}")
    return k // 2 if k % 2 == 0 else (k + 1) // 2


def check_base(n: int, k: int, q: int) -> None:
    """Validate (n, k, q) independent of the inversion-cell count."""
    if q < 2:
        raise InvalidParams(f"q must be >= 2, got {q}")
    if k < 2:
        raise InvalidParams(f"k must be >= 2, got {k}")
    if k % 2 and (q - 1) % 2:
        raise InvalidParams(
            f"k={k} and q-1={q - 1} are both odd; a full slice would decode as 1"
        )
    if n < k * k:
        raise InvalidParams(f"n={n} is smaller than k^2={k * k}")


@dataclass(frozen=True)
class CodeParams:
    """Geometry of an I-ILIFC(n, k, q, r) block.

    ``r == 0`` is the plain ILIFC(n, k, q). Construction validates every
    structural constraint: ``q >= 2``, ``k >= 2``, ``k`` or ``q - 1`` even,
    and at least ``k`` slices after the inversion cells are set aside.
    """

    n: int
    k: int
    q: int
    r: int = 0

    def __post_init__(self) -> None:
        for name in ("n", "k", "q", "r"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidParams(f"{name} must be an int, got {value!r}")
        if self.r < 0:
            raise InvalidParams(f"r must be >= 0, got {self.r}")
        check_base(self.n, self.k, self.q)
        if self.n - self.r < self.k * self.k:
            raise InvalidParams(
                f"n - r = {self.n - self.r} leaves fewer than k={self.k} slices"
            )

    @property
    def m(self) -> int:
        return (self.n - self.r) // self.k

    @property
    def delta(self) -> int:
        return delta_for(self.k)

    @property
    def slice_capacity(self) -> int:
        """Weight of a full slice, k(q-1)."""
        return self.k * (self.q - 1)

    @property
    def leftover(self) -> int:
        """Data cells that never belong to a slice."""
        return (self.n - self.r) - self.m * self.k

    def with_r(self, r: int) -> CodeParams:
        return CodeParams(self.n, self.k, self.q, r)

    def __str__(self) -> str:
        if self.r == 0:
            return f"ILIFC({self.n},{self.k},{self.q})"
        return f"I-ILIFC({self.n},{self.k},{self.q},{self.r})"


def admissible_r(n: int, k: int, q: int) -> list[int]:
    """Inversion-cell counts with ``n - r >= k^2`` and ``k | (n - r)``, ascending."""
    check_base(n, k, q)
    return [r for r in range(0, n - k * k + 1) if (n - r) % k == 0]
