"""Parameter sets for the four H(1,1) cylinder diagrams and counting oracles.

Each surface with cylinder diagram A, B, C or D is described by cylinder
heights, horizontal saddle-connection lengths and shears.  The ``Params*``
classes hold one such tuple.  :func:`iter_params` walks the uniqueness set
for a diagram (one tuple per surface) and :func:`is_primitive_params` applies
the gcd test for primitivity.

Counting runs in two modes.  ``explicit`` visits every shear value.
``analytic`` replaces the shear loops by the closed-form counts of
:func:`shear_count_formula` and its relatives.  It also collapses length
loops whose summand does not depend on the loop variable.
"""

from __future__ import annotations

import logging
from dataclasses import astuple, dataclass
from functools import lru_cache
from math import comb, gcd
from typing import Iterator, Union

import numpy as np

from . import arith
from .formulas import exact_div

logger = logging.getLogger(__name__)

DIAGRAMS = ("A", "B", "C", "D")
EXPLICIT_CAP = 24
ANALYTIC_CAP = 300


@dataclass(frozen=True, order=True)
class ParamsA:
    p: int
    j: int
    k: int
    l: int
    m: int
    alpha: int

    @property
    def width(self) -> int:
        return self.j + self.k + self.l + self.m

    @property
    def n(self) -> int:
        return self.p * self.width

    def is_valid(self) -> bool:
        return min(self.p, self.j, self.k, self.l, self.m) >= 1 and 0 <= self.alpha < self.width

    def subset(self) -> int | None:
        """Index 1..5 of the uniqueness subset containing this tuple, else None."""
        if not self.is_valid():
            return None
        case = _case_a(self.j, self.k, self.l, self.m)
        if case == 5 and 2 * self.alpha >= self.width:
            return None
        return case


def _case_a(j: int, k: int, l: int, m: int) -> int | None:
    if j < k and j < l and j < m:
        return 1
    if j == l < k <= m:
        return 2
    if j == k < l and j < m:
        return 3
    if j == k == l < m:
        return 4
    if j == k == l == m:
        return 5
    return None


@dataclass(frozen=True, order=True)
class ParamsB:
    p: int
    q: int
    k: int
    l: int
    m: int
    alpha: int
    beta: int

    @property
    def n(self) -> int:
        return self.p * (self.k + self.l + self.m) + self.q * self.m

    def is_valid(self) -> bool:
        return (
            min(self.p, self.q, self.k, self.l, self.m) >= 1
            and 0 <= self.alpha < self.k + self.l + self.m
            and 0 <= self.beta < self.m
        )

    def subset(self) -> int | None:
        # Every structurally valid tuple is in the uniqueness set.
        return 1 if self.is_valid() else None


@dataclass(frozen=True, order=True)
class ParamsC:
    p: int
    q: int
    k: int
    l: int
    m: int
    alpha: int
    beta: int

    @property
    def n(self) -> int:
        return self.p * (self.k + self.l) + self.q * (self.l + self.m)

    def is_valid(self) -> bool:
        return (
            min(self.p, self.q, self.k, self.l, self.m) >= 1
            and 0 <= self.alpha < self.k + self.l
            and 0 <= self.beta < self.l + self.m
        )

    def subset(self) -> int | None:
        if not self.is_valid():
            return None
        if self.k < self.m:
            return 1
        if self.k == self.m and self.p < self.q:
            return 2
        if self.k == self.m and self.p == self.q and self.alpha <= self.beta:
            return 3
        return None


@dataclass(frozen=True, order=True)
class ParamsD:
    p: int
    q: int
    r: int
    k: int
    l: int
    alpha: int
    beta: int
    gamma: int

    @property
    def n(self) -> int:
        return (self.p + self.q) * self.k + (self.r + self.q) * self.l

    def is_valid(self) -> bool:
        return (
            min(self.p, self.q, self.r, self.k, self.l) >= 1
            and 0 <= self.alpha < self.k
            and 0 <= self.beta < self.k + self.l
            and 0 <= self.gamma < self.l
        )

    def subset(self) -> int | None:
        if not self.is_valid():
            return None
        if self.k < self.l:
            return 1
        # p < r here: p = r belongs to the next case only.
        if self.k == self.l and self.p < self.r:
            return 2
        if self.k == self.l and self.p == self.r and self.alpha <= self.gamma:
            return 3
        return None


Params = Union[ParamsA, ParamsB, ParamsC, ParamsD]
PARAM_TYPES = {"A": ParamsA, "B": ParamsB, "C": ParamsC, "D": ParamsD}


@dataclass(frozen=True, order=True)
class OmegaA:
    """Four marked points 1 <= x < y < z < t <= n on a circle of length n."""

    x: int
    y: int
    z: int
    t: int


def diagram_of(params: Params) -> str:
    for name, cls in PARAM_TYPES.items():
        if isinstance(params, cls):
            return name
    raise TypeError(f"not a parameter tuple: {params!r}")


# -- primitivity -----------------------------------------------------------


def is_primitive_params(diagram: str, params: Params) -> bool:
    """Gcd test for primitivity of the surface described by ``params``."""
    t = params
    if diagram == "A":
        return t.p == 1 and gcd(t.j + t.k, t.k + t.l, t.n) == 1
    if diagram == "B":
        return (
            gcd(t.p, t.q) == 1
            and gcd(t.k + t.l, t.m, t.p * t.beta - t.q * t.alpha + (t.p + t.q) * t.l) == 1
        )
    if diagram == "C":
        return gcd(t.p, t.q) == 1 and gcd(t.k + t.l, t.l + t.m, t.p * t.beta - t.q * t.alpha) == 1
    if diagram == "D":
        return (
            gcd(t.p + t.q, t.r + t.q) == 1
            and gcd(
                t.k,
                t.l,
                (t.p - t.r) * t.beta + (t.p + t.q) * t.gamma - (t.r + t.q) * t.alpha,
            )
            == 1
        )
    raise ValueError(f"unknown diagram {diagram!r}")


# -- enumeration -----------------------------------------------------------
#
# The ``_base_*`` generators yield the shear-free part of each tuple in
# lexicographic order; the shear ranges are then expanded in order as well.


def _base_a(n: int) -> Iterator[tuple[int, int, int, int, int]]:
    for p in range(1, n + 1):
        if n % p:
            continue
        w = n // p
        for j in range(1, w - 2):
            for k in range(1, w - j - 1):
                for l in range(1, w - j - k):
                    yield p, j, k, l, w - j - k - l


def _base_b(n: int) -> Iterator[tuple[int, int, int, int, int]]:
    for p in range(1, n + 1):
        for q in range(1, n + 1):
            if 3 * p + q > n:
                break
            for k in range(1, n):
                for l in range(1, n):
                    rest = n - p * (k + l)
                    if rest < p + q:
                        break
                    if rest % (p + q) == 0:
                        yield p, q, k, l, rest // (p + q)


def _base_c(n: int) -> Iterator[tuple[int, int, int, int, int]]:
    for p in range(1, n + 1):
        for q in range(1, n + 1):
            if 2 * (p + q) > n:
                break
            for k in range(1, n):
                for l in range(1, n):
                    rest = n - p * (k + l) - q * l
                    if rest < q:
                        break
                    if rest % q == 0:
                        yield p, q, k, l, rest // q


def _base_d(n: int) -> Iterator[tuple[int, int, int, int, int]]:
    for p in range(1, n + 1):
        for q in range(1, n + 1):
            if p + 2 * q + 1 > n:
                break
            for r in range(1, n + 1):
                if p + 2 * q + r > n:
                    break
                for k in range(1, n):
                    rest = n - (p + q) * k
                    if rest < r + q:
                        break
                    if rest % (r + q) == 0:
                        yield p, q, r, k, rest // (r + q)


def iter_params(diagram: str, n: int, unique: bool = True) -> Iterator[Params]:
    """Stream parameter tuples for ``diagram`` with ``n`` squares.

    With ``unique=True`` (the default) this is the uniqueness set: each
    n-square surface with that diagram appears exactly once.  With
    ``unique=False`` every structurally valid tuple is produced, so a
    surface may repeat.  The order is lexicographic in the field order.
    """
    if diagram == "A":
        for p, j, k, l, m in _base_a(n):
            w = n // p
            case = _case_a(j, k, l, m)
            if unique and case is None:
                continue
            top = (w + 1) // 2 if unique and case == 5 else w
            for alpha in range(top):
                yield ParamsA(p, j, k, l, m, alpha)
    elif diagram == "B":
        for p, q, k, l, m in _base_b(n):
            for alpha in range(k + l + m):
                for beta in range(m):
                    yield ParamsB(p, q, k, l, m, alpha, beta)
    elif diagram == "C":
        for p, q, k, l, m in _base_c(n):
            if unique and not (k < m or (k == m and p <= q)):
                continue
            for alpha in range(k + l):
                for beta in range(l + m):
                    if unique and k == m and p == q and alpha > beta:
                        continue
                    yield ParamsC(p, q, k, l, m, alpha, beta)
    elif diagram == "D":
        for p, q, r, k, l in _base_d(n):
            if unique and not (k < l or (k == l and p <= r)):
                continue
            for alpha in range(k):
                for beta in range(k + l):
                    for gamma in range(l):
                        if unique and k == l and p == r and alpha > gamma:
                            continue
                        yield ParamsD(p, q, r, k, l, alpha, beta, gamma)
    else:
        raise ValueError(f"unknown diagram {diagram!r}")


# -- counting lemmas ---------------------------------------------------------


def shear_count_formula(p: int, q: int, k: int, l: int) -> int:
    """Number of shear pairs in a k-by-l box meeting the gcd condition.

    Equals k*l*phi(d)/d with d = gcd(k, l); exact because d divides k.
    """
    if gcd(p, q) != 1:
        raise ValueError(f"p={p} and q={q} are not coprime")
    if k < 1 or l < 1:
        raise ValueError("box sides must be positive")
    d = gcd(k, l)
    return exact_div(k * l * _phi(d), d, "shear count")


def shear_count_brute(p: int, q: int, k: int, l: int, beta1: int = 0, beta2: int = 0) -> int:
    """Count (alpha, gamma) in [beta1, beta1+k) x [beta2, beta2+l) with gcd(k, l, p*gamma - q*alpha) = 1."""
    if gcd(p, q) != 1:
        raise ValueError(f"p={p} and q={q} are not coprime")
    if k < 1 or l < 1:
        raise ValueError("box sides must be positive")
    d = gcd(k, l)
    return sum(
        1
        for alpha in range(beta1, beta1 + k)
        for gamma in range(beta2, beta2 + l)
        if gcd(d, p * gamma - q * alpha) == 1
    )


def quadruple_count(n: int, d: int) -> int:
    """Number of 1 <= x < y < z < t <= n with d | z - x and d | t - y."""
    if d < 1 or n % d:
        raise ValueError(f"{d} does not divide {n}")
    e = n // d
    return comb(d, 2) * comb(e, 2) + 3 * comb(d, 2) * comb(e, 3) + d * d * comb(e, 4)


def quadruple_count_brute(n: int, d: int) -> int:
    """Direct iteration over x < y < z < t with z = x and t = y modulo d."""
    if d < 1 or n % d:
        raise ValueError(f"{d} does not divide {n}")
    return sum(
        1
        for x in range(1, n + 1)
        for y in range(x + 1, n + 1)
        for z in range(x + d, n + 1, d)
        if z > y
        for t in range(y + d, n + 1, d)
        if t > z
    )


# -- Omega and the reparametrization of diagram A ----------------------------


def iter_omega(n: int) -> Iterator[OmegaA]:
    for x in range(1, n + 1):
        for y in range(x + 1, n + 1):
            for z in range(y + 1, n + 1):
                for t in range(z + 1, n + 1):
                    if gcd(z - x, t - y, n) == 1:
                        yield OmegaA(x, y, z, t)


def count_omega(n: int) -> int:
    """|Omega| at n.

    Writes the quadruple through its gaps u = y - x, v = z - y, s = t - z.
    The gcd test depends only on (u + v, v + s), and each gap triple has
    n - u - v - s starting points x.  The (u, s) plane is vectorized.
    """
    if n < 4:
        return 0
    total = 0
    grid = np.arange(1, n, dtype=np.int64)
    u = grid[:, None]
    s = grid[None, :]
    for v in range(1, n - 2):
        room = n - v - u - s
        g = np.gcd(np.gcd(u + v, v + s), n)
        total += int(np.where((room > 0) & (g == 1), room, 0).sum())
    return total


def omega_from_params(t: ParamsA) -> OmegaA:
    """The map f: marked points of the bottom segments after shearing."""
    if t.p != 1:
        raise ValueError("only height-one tuples map into Omega")
    n = t.n
    pts = sorted(
        (v - 1) % n + 1
        for v in (
            t.alpha + 1,
            t.alpha + 1 + t.j,
            t.alpha + 1 + t.j + t.m,
            t.alpha + 1 + t.j + t.m + t.l,
        )
    )
    return OmegaA(*pts)


def params_from_omega(w: OmegaA, n: int) -> ParamsA:
    """Inverse map g of :func:`omega_from_params` on Omega."""
    x, y, z, t = w.x, w.y, w.z, w.t
    gaps = (y - x, z - y, t - z, n - t + x)
    lo = min(gaps)
    smallest = [i for i, g in enumerate(gaps) if g == lo]
    # ``pos_j`` is the position in the gap cycle holding j; the others follow
    # cyclically in the order j, m, l, k.
    if len(smallest) == 1:
        pos_j = smallest[0]
    elif len(smallest) == 2 and (smallest[1] - smallest[0]) % 4 in (1, 3):
        a, b = smallest
        first = a if (b - a) % 4 == 1 else b
        pos_j = (first + 1) % 4  # (k, j) = (a, b) read cyclically
    elif len(smallest) in (2, 3):
        hi = max(gaps)
        largest = [i for i, g in enumerate(gaps) if g == hi]
        if len(largest) != 1:
            raise ValueError(f"{w} is not in Omega for n={n}")
        pos_j = (largest[0] - 1) % 4
    else:
        raise ValueError(f"{w} is not in Omega for n={n}")
    j = gaps[pos_j]
    m = gaps[(pos_j + 1) % 4]
    l = gaps[(pos_j + 2) % 4]
    k = gaps[(pos_j + 3) % 4]
    # Gap i starts at the i-th marked point; j starts at alpha + 1.
    starts = (x, y, z, t)
    alpha = (starts[pos_j] - 1) % n
    return ParamsA(1, j, k, l, m, alpha)


# -- counting by enumeration ---------------------------------------------------


def _count_explicit(diagram: str, n: int) -> int:
    if diagram == "A":
        total = 0
        for p, j, k, l, m in _base_a(n):
            case = _case_a(j, k, l, m)
            if case is None:
                continue
            w = n // p
            top = (w + 1) // 2 if case == 5 else w
            for alpha in range(top):
                if is_primitive_params("A", ParamsA(p, j, k, l, m, alpha)):
                    total += 1
        return total
    if diagram == "B":
        total = 0
        for p, q, k, l, m in _base_b(n):
            if gcd(p, q) != 1:
                continue
            g = gcd(k + l, m)
            c = (p + q) * l
            for alpha in range(k + l + m):
                for beta in range(m):
                    if gcd(g, p * beta - q * alpha + c) == 1:
                        total += 1
        return total
    if diagram == "C":
        total = 0
        for p, q, k, l, m in _base_c(n):
            if gcd(p, q) != 1 or not (k < m or (k == m and p <= q)):
                continue
            g = gcd(k + l, l + m)
            sym = k == m and p == q
            for alpha in range(k + l):
                for beta in range(alpha if sym else 0, l + m):
                    if gcd(g, p * beta - q * alpha) == 1:
                        total += 1
        return total
    if diagram == "D":
        total = 0
        for p, q, r, k, l in _base_d(n):
            if gcd(p + q, r + q) != 1 or not (k < l or (k == l and p <= r)):
                continue
            g = gcd(k, l)
            sym = k == l and p == r
            for alpha in range(k):
                for beta in range(k + l):
                    for gamma in range(alpha if sym else 0, l):
                        if gcd(g, (p - r) * beta + (p + q) * gamma - (r + q) * alpha) == 1:
                            total += 1
        return total
    raise ValueError(f"unknown diagram {diagram!r}")


def _count_analytic_a(n: int) -> int:
    # Only height p = 1 can pass the gcd test, and the test ignores alpha,
    # so each admissible (j, k, l, m) contributes its number of shears.
    # In every uniqueness case j is a smallest length, so j <= w/4 and the
    # (k, l) grid can start at j.
    w = n
    total = 0
    for j in range(1, w // 4 + 1):
        kk = np.arange(j, w, dtype=np.int32)[:, None]
        ll = np.arange(j, w, dtype=np.int32)[None, :]
        m = w - j - kk - ll
        prim = (m >= j) & (np.gcd(np.gcd(j + kk, n), kk + ll) == 1)
        s1 = (j < kk) & (j < ll) & (j < m)
        s2 = (j == ll) & (j < kk) & (kk <= m)
        s3 = (j == kk) & (j < ll) & (j < m)
        s4 = (j == kk) & (j == ll) & (j < m)
        s5 = (j == kk) & (j == ll) & (j == m)
        full = prim & (s1 | s2 | s3 | s4)
        half = prim & s5
        total += int(np.count_nonzero(full)) * w + int(np.count_nonzero(half)) * ((w + 1) // 2)
    return total


def _count_analytic_b(n: int) -> int:
    # Loop over the long height p and width w = k + l + m, then the short
    # width m (a divisor of n - p*w, giving q).  The shear count depends on
    # (k, l) only through k + l = w - m, so the w - m - 1 splits of k + l
    # are counted at once.
    total = 0
    for p in range(1, n + 1):
        for w in range(3, n + 1):
            rest = n - p * w
            if rest < 1:
                break
            for m in _divisors_of(rest):
                if m > w - 2:
                    break
                q = rest // m
                if gcd(p, q) != 1:
                    continue
                d = gcd(w - m, m)
                total += (w - m - 1) * exact_div(w * m * _phi(d), d, "B shear count")
    return total


def _count_analytic_c(n: int) -> int:
    # Loop over coprime heights p, q and the two widths a = k + l and
    # b = l + m; l runs over 1..min(a, b) - 1 and fixes k and m.
    total = 0
    for p in range(1, n + 1):
        for a in range(2, n + 1):
            rest = n - p * a
            if rest < 2:
                break
            for q in _divisors_of(rest):
                b = rest // q
                if b < 2:
                    break
                if gcd(p, q) != 1:
                    continue
                d = gcd(a, b)
                box = exact_div(a * b * _phi(d), d, "C shear count")
                splits = min(a, b) - 1
                if a < b or (a == b and p < q):
                    total += splits * box
                elif a == b and p == q:
                    # symmetric case: keep alpha <= beta
                    diag = sum(1 for s in range(a) if gcd(a, b, (p - q) * s) == 1)
                    total += splits * exact_div(box + diag, 2, "C diagonal")
    return total


def _count_analytic_d(n: int) -> int:
    # Loop over P = p + q, width k, then width l (a divisor of n - P*k,
    # giving R = r + q); q runs over 1..min(P, R) - 1.  For fixed beta the
    # (alpha, gamma) box obeys the shear lemma with an offset, and beta
    # takes k + l values.
    total = 0
    for big_p in range(2, n + 1):
        for k in range(1, n + 1):
            rest = n - big_p * k
            if rest < 2:
                break
            for l in _divisors_of(rest):
                big_r = rest // l
                if big_r < 2:
                    break
                if k > l or gcd(big_p, big_r) != 1:
                    continue
                d = gcd(k, l)
                box = (k + l) * exact_div(k * l * _phi(d), d, "D shear count")
                for q in range(1, min(big_p, big_r)):
                    p, r = big_p - q, big_r - q
                    if k < l or p < r:
                        total += box
                    elif p == r:
                        diag = sum(
                            1
                            for beta in range(k + l)
                            for a in range(k)
                            if gcd(k, l, (p - r) * (beta + a)) == 1
                        )
                        total += exact_div(box + diag, 2, "D diagonal")
    return total


_ANALYTIC = {
    "A": _count_analytic_a,
    "B": _count_analytic_b,
    "C": _count_analytic_c,
    "D": _count_analytic_d,
}


def count_by_enumeration(diagram: str, n: int, shear_mode: str = "explicit") -> int:
    """Number of primitive tuples in the uniqueness set of ``diagram`` at ``n``."""
    if diagram not in DIAGRAMS:
        raise ValueError(f"unknown diagram {diagram!r}")
    if n < 4:
        return 0
    if shear_mode == "explicit":
        if n > EXPLICIT_CAP:
            raise ValueError(f"explicit enumeration is capped at n <= {EXPLICIT_CAP}")
        return _count_explicit(diagram, n)
    if shear_mode == "analytic":
        if n > ANALYTIC_CAP:
            raise ValueError(f"analytic enumeration is capped at n <= {ANALYTIC_CAP}")
        return _ANALYTIC[diagram](n)
    raise ValueError(f"unknown shear mode {shear_mode!r}")


# -- auxiliary direct sums -----------------------------------------------------


@lru_cache(maxsize=8)
def _phi_table(n_max: int) -> tuple[int, ...]:
    return (0, *arith.tabulate("phi", 1, n_max).values)


def _phi(m: int) -> int:
    size = 1024
    while size < m:
        size *= 2
    return _phi_table(size)[m]


@lru_cache(maxsize=None)
def _divisor_lists(n_max: int) -> tuple[tuple[int, ...], ...]:
    lists: list[list[int]] = [[] for _ in range(n_max + 1)]
    for d in range(1, n_max + 1):
        for mult in range(d, n_max + 1, d):
            lists[mult].append(d)
    return tuple(tuple(x) for x in lists)


def _divisors_of(m: int) -> tuple[int, ...]:
    size = 1024
    while size < m:
        size *= 2
    return _divisor_lists(size)[m]


def _weighted_terms(n: int, name: str) -> Iterator[tuple[int, int]]:
    """Yield (term * phi(d), d) for every summand of the named direct sum."""
    for p in range(1, n):
        for k in range(1, (n - 1) // p + 1):
            rest = n - p * k
            for q in _divisors_of(rest):
                l = rest // q
                if name in ("X", "W"):
                    if not (p > q and gcd(p, q) == 1):
                        continue
                    term = (k + l) * k * l * (q if name == "W" else 1)
                elif name == "Y":
                    # l plays the role of m here
                    if not (k > l and gcd(p, q) == 1):
                        continue
                    term = k * l
                elif name == "U":
                    if not k > l:
                        continue
                    term = k * l * l
                elif name == "V":
                    term = k * l
                else:
                    raise ValueError(f"unknown intermediate sum {name!r}")
                d = gcd(k, l)
                yield term * _phi(d), d


def intermediate_direct(name: str, n: int) -> int:
    """Direct sum defining X, Y, U, V or W at ``n``.

    Every summand carries a factor phi(d)/d with d = gcd of the two lengths.
    The product term*phi(d) is formed first and divided by d last; d^2
    divides k*l, so each division is exact and is checked.
    """
    if name not in ("X", "Y", "U", "V", "W"):
        raise ValueError(f"unknown intermediate sum {name!r}")
    if n < 1:
        raise ValueError("n must be positive")
    return sum(exact_div(num, d, f"{name}({n}) term") for num, d in _weighted_terms(n, name))


def astuple_params(params: Params) -> tuple[int, ...]:
    return astuple(params)
