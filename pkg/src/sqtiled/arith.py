"""Exact-integer arithmetic functions: sieved tables and convolutions.

Every table is a :class:`ArithTable` holding ``f(1), ..., f(n_max)`` as Python
integers.  Python integers are unbounded, so the fixed-width overflow failure
mode of a C implementation cannot occur here; sizing limits are enforced
instead on the quadratic additive convolution.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from operator import mul
from typing import Callable, Iterator, Sequence

logger = logging.getLogger(__name__)

#: Largest order accepted for ``id_k``, ``jordan_k`` and ``sigma_k``.
MAX_ORDER = 4

#: Default ceiling on ``n_max`` for :func:`additive_convolve` (quadratic cost).
ADDITIVE_CAP = 10_000

FUNCTION_IDS = ("one", "eps", "id", "mobius", "phi", "jordan", "sigma")


class TableMismatchError(ValueError):
    """Raised when two tables of different length are combined."""


class CapacityError(ValueError):
    """Raised when a request exceeds a documented sizing limit."""


@dataclass(frozen=True)
class ArithTable:
    """Values ``f(1..n_max)`` of an integer-valued arithmetic function.

    ``values[i]`` stores ``f(i + 1)``; index with ``table[m]`` for ``f(m)``.
    """

    n_max: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise ValueError(f"n_max must be positive, got {self.n_max}")
        if len(self.values) != self.n_max:
            raise ValueError(
                f"expected {self.n_max} values, got {len(self.values)}"
            )

    @classmethod
    def from_function(cls, fn: Callable[[int], int], n_max: int) -> ArithTable:
        return cls(n_max, tuple(int(fn(m)) for m in range(1, n_max + 1)))

    @classmethod
    def from_padded(cls, padded: Sequence[int]) -> ArithTable:
        """Build from a list whose index 0 is a placeholder."""
        return cls(len(padded) - 1, tuple(padded[1:]))

    def __getitem__(self, m: int) -> int:
        if not 1 <= m <= self.n_max:
            raise IndexError(f"argument {m} outside 1..{self.n_max}")
        return self.values[m - 1]

    def __len__(self) -> int:
        return self.n_max

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def padded(self) -> list[int]:
        """Values as a list indexed directly by ``m`` (index 0 holds 0)."""
        return [0, *self.values]


@dataclass(frozen=True)
class SpfSieve:
    """Smallest-prime-factor table for ``2..n_max``."""

    n_max: int
    smallest_prime_factor: tuple[int, ...]  # index m holds spf(m); 0 and 1 hold 0 / 1

    @classmethod
    def build(cls, n_max: int) -> SpfSieve:
        if n_max < 1:
            raise ValueError(f"n_max must be positive, got {n_max}")
        spf = list(range(n_max + 1))
        i = 2
        while i * i <= n_max:
            if spf[i] == i:
                for j in range(i * i, n_max + 1, i):
                    if spf[j] == j:
                        spf[j] = i
            i += 1
        return cls(n_max, tuple(spf))

    def is_prime(self, m: int) -> bool:
        return m >= 2 and self.smallest_prime_factor[m] == m

    def factorize(self, m: int) -> list[tuple[int, int]]:
        """Prime factorization of ``m`` as ``[(p, e), ...]`` with increasing p."""
        if not 1 <= m <= self.n_max:
            raise ValueError(f"{m} outside sieve range 1..{self.n_max}")
        spf = self.smallest_prime_factor
        out: list[tuple[int, int]] = []
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        return out


def factorize(m: int) -> list[tuple[int, int]]:
    """Trial-division factorization for a single integer ``m >= 1``."""
    if m < 1:
        raise ValueError(f"cannot factorize {m}")
    out: list[tuple[int, int]] = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def jordan(k: int, m: int) -> int:
    """J_k(m) = m^k * prod_{p | m} (1 - p^-k), evaluated for one argument."""
    result = 1
    for p, e in factorize(m):
        result *= p ** (k * e) - p ** (k * (e - 1))
    return result


def _multiplicative(sieve: SpfSieve, prime_power: Callable[[int, int], int]) -> list[int]:
    """Tabulate a multiplicative function from its values on prime powers."""
    n_max = sieve.n_max
    spf = sieve.smallest_prime_factor
    out = [0] * (n_max + 1)
    if n_max >= 1:
        out[1] = 1
    for m in range(2, n_max + 1):
        p = spf[m]
        rest = m
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        out[m] = out[rest] * prime_power(p, e)
    return out


def tabulate(which: str, k: int, n_max: int, sieve: SpfSieve | None = None) -> ArithTable:
    """Tabulate a named arithmetic function on ``1..n_max``.

    ``which`` is one of ``one``, ``eps``, ``id`` (Id_k), ``mobius``, ``phi``,
    ``jordan`` (J_k) or ``sigma`` (sigma_k).  ``k`` is ignored by the
    functions that take no order.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")
    if not 0 <= k <= MAX_ORDER:
        raise CapacityError(f"order k={k} outside 0..{MAX_ORDER}")
    if which not in FUNCTION_IDS:
        raise ValueError(f"unknown arithmetic function {which!r}")

    if which == "one":
        padded = [0] + [1] * n_max
    elif which == "eps":
        padded = [0] * (n_max + 1)
        padded[1] = 1
    elif which == "id":
        padded = [0] + [m**k for m in range(1, n_max + 1)]
    elif which == "sigma":
        padded = [0] * (n_max + 1)
        for d in range(1, n_max + 1):
            dk = d**k
            for mult in range(d, n_max + 1, d):
                padded[mult] += dk
    else:
        sieve = sieve if sieve is not None and sieve.n_max >= n_max else SpfSieve.build(n_max)
        if which == "mobius":
            padded = _multiplicative(sieve, lambda p, e: -1 if e == 1 else 0)
        else:
            order = 1 if which == "phi" else k
            padded = _multiplicative(
                sieve, lambda p, e: p ** (order * e) - p ** (order * (e - 1))
            )
        padded = padded[: n_max + 1]
    return ArithTable.from_padded(padded)


def _check_lengths(f: ArithTable, g: ArithTable) -> None:
    if f.n_max != g.n_max:
        raise TableMismatchError(f"table lengths differ: {f.n_max} vs {g.n_max}")


def dirichlet_convolve(f: ArithTable, g: ArithTable) -> ArithTable:
    """(f * g)(m) = sum over d | m of f(d) g(m/d), by the divisor-pair loop."""
    _check_lengths(f, g)
    n_max = f.n_max
    fv = f.padded()
    gv = g.padded()
    out = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        fd = fv[d]
        if fd == 0:
            continue
        for e in range(1, n_max // d + 1):
            out[d * e] += fd * gv[e]
    return ArithTable.from_padded(out)


def additive_convolve(f: ArithTable, g: ArithTable, cap: int = ADDITIVE_CAP) -> ArithTable:
    """(f Δ g)(m) = sum_{j=1}^{m-1} f(j) g(m-j); the value at 1 is the empty sum."""
    _check_lengths(f, g)
    if f.n_max > cap:
        raise CapacityError(
            f"additive convolution of length {f.n_max} exceeds cap {cap}"
        )
    fv = f.padded()
    gv = g.padded()
    out = [0] * (f.n_max + 1)
    for m in range(2, f.n_max + 1):
        # f[1..m-1] against g[m-1..1]
        out[m] = sum(map(mul, fv[1:m], reversed(gv[1:m])))
    return ArithTable.from_padded(out)


def pointwise_mul(f: ArithTable, g: ArithTable) -> ArithTable:
    _check_lengths(f, g)
    return ArithTable(f.n_max, tuple(map(mul, f.values, g.values)))
