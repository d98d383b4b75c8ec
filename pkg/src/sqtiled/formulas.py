"""Closed-form census counts for genus-two square-tiled surfaces.

The counts of primitive n-square surfaces in H(1,1), split by the four
cylinder diagrams A-D, are polynomials in n times Jordan totients, plus one
convolution term shared by B and D.  Each fractional coefficient is cleared
by scaling to a common denominator; the scaled value is checked for exact
divisibility before dividing, so a non-integral result always points at a
bug rather than at the data.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import arith
from .arith import ArithTable

logger = logging.getLogger(__name__)

#: Smallest n for which the H(1,1) census is non-trivial.
H11_MIN_N = 4
#: Smallest n for which the H(2) census is non-trivial.
H2_MIN_N = 3

INTERMEDIATE_NAMES = ("X", "Y", "U", "V", "W")


class DivisibilityError(ArithmeticError):
    """A scaled count was not divisible by its denominator."""


def exact_div(num: int, den: int, what: str = "value") -> int:
    q, r = divmod(num, den)
    if r:
        raise DivisibilityError(f"{what}: {num} is not divisible by {den}")
    return q


@dataclass(frozen=True)
class CensusRow:
    n: int
    a: int
    b: int
    c: int
    d: int
    e: int

    def ratios(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """A/E, B/E, C/E, D/E as exact fractions (zero when E = 0)."""
        if self.e == 0:
            zero = Fraction(0)
            return (zero, zero, zero, zero)
        return tuple(Fraction(x, self.e) for x in (self.a, self.b, self.c, self.d))  # type: ignore[return-value]

    def as_dict(self) -> dict:
        out = {"n": self.n, "A": self.a, "B": self.b, "C": self.c, "D": self.d, "E": self.e}
        for key, r in zip(("rA", "rB", "rC", "rD"), self.ratios()):
            out[key] = [r.numerator, r.denominator]
        return out


@dataclass(frozen=True)
class H2Row:
    n: int
    f: int
    g: int
    h: int


@dataclass(frozen=True)
class LimitDensities:
    zeta2: float
    zeta3: float
    zeta5: float
    limit_a: float
    limit_b: float
    limit_c: float
    limit_d: float


class CensusTables:
    """Lazily built arithmetic tables shared by the census formulas.

    All tables cover ``1..n_max``.  ``conv`` is the expensive one: it needs
    the quadratic additive convolution and is only built on first access.
    """

    def __init__(self, n_max: int, additive_cap: int = arith.ADDITIVE_CAP) -> None:
        if n_max < 1:
            raise ValueError(f"n_max must be positive, got {n_max}")
        self.n_max = n_max
        self.additive_cap = additive_cap
        self.sieve = arith.SpfSieve.build(n_max)

    def _tab(self, which: str, k: int = 0) -> ArithTable:
        return arith.tabulate(which, k, self.n_max, self.sieve)

    @cached_property
    def mobius(self) -> ArithTable:
        return self._tab("mobius")

    @cached_property
    def phi(self) -> ArithTable:
        return self._tab("phi")

    @cached_property
    def j1(self) -> ArithTable:
        return self._tab("jordan", 1)

    @cached_property
    def j2(self) -> ArithTable:
        return self._tab("jordan", 2)

    @cached_property
    def sigma1(self) -> ArithTable:
        return self._tab("sigma", 1)

    @cached_property
    def sigma2(self) -> ArithTable:
        return self._tab("sigma", 2)

    @cached_property
    def sigma3(self) -> ArithTable:
        return self._tab("sigma", 3)

    @cached_property
    def sigma4(self) -> ArithTable:
        return self._tab("sigma", 4)

    @cached_property
    def sigma2_inverse(self) -> ArithTable:
        """Dirichlet inverse of sigma_2, computed as (Id_2 . mu) * mu."""
        id2_mu = arith.pointwise_mul(self._tab("id", 2), self.mobius)
        return arith.dirichlet_convolve(id2_mu, self.mobius)

    @cached_property
    def conv(self) -> ArithTable:
        return conv_term_batch(self.n_max, self)


def conv_term_batch(n_max: int, tables: CensusTables | None = None) -> ArithTable:
    """Table of (w * (sigma_1 Δ sigma_2))(m) for m <= n_max, w the Dirichlet inverse of sigma_2.

    The weight is built as w = (Id_2 . mu) * mu.  On squarefree arguments it
    equals the pointwise product mu . sigma_2, but not at 4, 8, 9 and other
    non-squarefree values.  Only the inverse reproduces the parameter
    enumeration (for example B(8) = 122, D(8) = 10).
    """
    if tables is None:
        tables = CensusTables(n_max)
    if n_max > tables.additive_cap:
        raise arith.CapacityError(
            f"n_max={n_max} exceeds the additive-convolution cap {tables.additive_cap}"
        )
    logger.debug("building convolution term up to %d", n_max)
    s1s2 = arith.additive_convolve(tables.sigma1, tables.sigma2, cap=tables.additive_cap)
    return arith.dirichlet_convolve(tables.sigma2_inverse, s1s2)


def _j1_j2(n: int, tables: CensusTables | None) -> tuple[int, int]:
    if tables is not None and n <= tables.n_max:
        return tables.j1[n], tables.j2[n]
    return arith.jordan(1, n), arith.jordan(2, n)


def _conv_at(n: int, conv: ArithTable | int) -> int:
    return conv if isinstance(conv, int) else conv[n]


def count_E(n: int, tables: CensusTables | None = None) -> int:
    if n < H11_MIN_N:
        return 0
    _, j2 = _j1_j2(n, tables)
    return exact_div((n - 2) * (n - 3) * j2, 6, f"E({n})")


def count_A(n: int, tables: CensusTables | None = None) -> int:
    if n < H11_MIN_N:
        return 0
    j1, j2 = _j1_j2(n, tables)
    # 24 A = 12 n J1 + (n^2 - 6n) J2
    return exact_div(12 * n * j1 + (n * n - 6 * n) * j2, 24, f"A({n})")


def count_B(n: int, conv: ArithTable | int, tables: CensusTables | None = None) -> int:
    """B(n); ``conv`` is a convolution table (see :func:`conv_term_batch`) or its value at n."""
    if n < H11_MIN_N:
        return 0
    j1, j2 = _j1_j2(n, tables)
    # 24 B = 24 conv - (2n^2 + 5n - 18) J2 - 12 n J1
    scaled = 24 * _conv_at(n, conv) - (2 * n * n + 5 * n - 18) * j2 - 12 * n * j1
    return exact_div(scaled, 24, f"B({n})")


def count_C(n: int, tables: CensusTables | None = None) -> int:
    if n < H11_MIN_N:
        return 0
    _, j2 = _j1_j2(n, tables)
    return exact_div((n - 2) * (n - 3) * j2, 24, f"C({n})")


def count_D(n: int, conv: ArithTable | int, tables: CensusTables | None = None) -> int:
    if n < H11_MIN_N:
        return 0
    _, j2 = _j1_j2(n, tables)
    # 6 D = (n^2 - n) J2 - 6 conv
    return exact_div((n * n - n) * j2 - 6 * _conv_at(n, conv), 6, f"D({n})")


def count_H2(n: int, tables: CensusTables | None = None) -> H2Row:
    """Counts (F, G, H) of primitive n-square surfaces in H(2): one cylinder, two, total."""
    if n < H2_MIN_N:
        return H2Row(n, 0, 0, 0)
    j1, j2 = _j1_j2(n, tables)
    f = exact_div(n * j2 - 3 * n * j1, 6, f"F({n})")
    g = exact_div(5 * n * j2 + 12 * n * j1 - 18 * j2, 24, f"G({n})")
    h = exact_div(3 * (n - 2) * j2, 8, f"H({n})")
    if f + g != h:
        raise DivisibilityError(f"F + G != H at n={n}: {f} + {g} != {h}")
    return H2Row(n, f, g, h)


def census_row(n: int, tables: CensusTables) -> CensusRow:
    conv = tables.conv
    return CensusRow(
        n,
        count_A(n, tables),
        count_B(n, conv, tables),
        count_C(n, tables),
        count_D(n, conv, tables),
        count_E(n, tables),
    )


def census_rows(n_min: int, n_max: int, tables: CensusTables | None = None) -> list[CensusRow]:
    if tables is None or tables.n_max < n_max:
        tables = CensusTables(n_max)
    return [census_row(n, tables) for n in range(n_min, n_max + 1)]


def intermediate_closed(name: str, n: int, tables: CensusTables) -> int | Fraction:
    """Closed form of one of the auxiliary sums X, Y, U, V, W at ``n``.

    The direct-sum definitions live in :func:`sqtiled.params.intermediate_direct`.
    Both sides agree for n >= 4.  Below that a closed form may differ from
    its (possibly empty) direct sum and need not even be an integer, so
    for n < 4 a non-integral value is returned as a ``Fraction``.
    """
    if n > tables.n_max:
        raise ValueError(f"n={n} outside tables (n_max={tables.n_max})")
    j1, j2 = tables.j1[n], tables.j2[n]
    if name == "X":
        # conv - n^2 J2 / 12
        return _closed(n, 12 * tables.conv[n] - n * n * j2, 12, f"X({n})")
    if name == "Y":
        return _closed(n, 5 * n * j2 + 12 * n * j1 - 18 * j2, 24, f"Y({n})")
    if name == "W":
        return _closed(n, (n * n - 2 * n) * j2, 12, f"W({n})")
    if name == "U":
        # (Id_2 mu) * g with 24 g(m) = sigma4 + 12 sigma3 - (12 m + 1) sigma2
        total = 0
        for d in _divisors(n):
            mu = tables.mobius[d]
            if mu:
                m = n // d
                g24 = (
                    tables.sigma4[m]
                    + 12 * tables.sigma3[m]
                    - (12 * m + 1) * tables.sigma2[m]
                )
                total += d * d * mu * g24
        return _closed(n, total, 24, f"U({n})")
    if name == "V":
        # (Id_1 mu) * g with 12 g(m) = 5 sigma3 + sigma1 - 6 m sigma1
        total = 0
        for d in _divisors(n):
            mu = tables.mobius[d]
            if mu:
                m = n // d
                g12 = 5 * tables.sigma3[m] + tables.sigma1[m] - 6 * m * tables.sigma1[m]
                total += d * mu * g12
        return _closed(n, total, 12, f"V({n})")
    raise ValueError(f"unknown intermediate sum {name!r}")


def _closed(n: int, num: int, den: int, what: str) -> int | Fraction:
    if n < H11_MIN_N and num % den:
        return Fraction(num, den)
    return exact_div(num, den, what)


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


# -- constants ---------------------------------------------------------------

_ZETA_TERMS = 10**6


def zeta_series(s: int, terms: int = _ZETA_TERMS) -> float:
    """zeta(s) for integer s >= 3 by direct summation plus an Euler-Maclaurin tail.

    The tail sum over k > N is replaced by
    N^(1-s)/(s-1) - N^-s/2 + s N^(-s-1)/12, whose own error is below
    N^(-s-3) (about 1e-36 for s=3, N=1e6).  ``math.fsum`` keeps the
    head summation correctly rounded, so the result is accurate to a few
    ulps, far inside the 1e-12 budget.
    """
    if s < 2:
        raise ValueError("series diverges for s < 2")
    head = math.fsum(1.0 / k**s for k in range(1, terms + 1))
    nf = float(terms)
    tail = nf ** (1 - s) / (s - 1) - nf ** (-s) / 2 + s * nf ** (-s - 1) / 12
    return head + tail


_LIMITS: LimitDensities | None = None


def limit_densities() -> LimitDensities:
    """Limits of A/E, B/E, C/E, D/E as n grows."""
    global _LIMITS
    if _LIMITS is None:
        z2 = math.pi**2 / 6
        z3 = zeta_series(3)
        z5 = zeta_series(5)
        ratio = z2 * z3 / (2 * z5)
        _LIMITS = LimitDensities(z2, z3, z5, 0.25, ratio - 0.5, 0.25, 1.0 - ratio)
    return _LIMITS


def asym_main_term_sigma1_sigma2(n: int, tables: CensusTables | None = None) -> float:
    """Main term zeta(2)zeta(3)/(12 zeta(5)) * sigma_4(n) of (sigma_1 Δ sigma_2)(n).

    Diagnostic only; never used in exact counts.
    """
    lim = limit_densities()
    if tables is not None and n <= tables.n_max:
        s4 = tables.sigma4[n]
    else:
        s4 = sum(d**4 for d in _divisors(n))
    return lim.zeta2 * lim.zeta3 / (12 * lim.zeta5) * s4
