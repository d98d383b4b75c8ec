"""Square-tiled surfaces as pairs of permutations.

An origami on n squares is a pair (sigma, tau) of permutations of
``0..n-1``: ``sigma[i]`` is the square glued to the right of square i and
``tau[i]`` the square glued on top of it.  Relabelling the squares by a
bijection conjugates both permutations, so a surface is a simultaneous
conjugacy class of pairs.

Conventions used throughout:

* Permutations are tuples, applied as functions: ``(f o g)(x) = f[g[x]]``.
* The commutator is ``c = tau o sigma o tau^-1 o sigma^-1``.  Following
  ``c`` from x means stepping left, down, right and up, which walks
  counterclockwise around the lower-left corner of x.  So ``c`` moves x
  exactly when that corner is a cone point, and two squares lie in the same
  cycle of ``c`` exactly when their lower-left corners are the same point.
  Other orderings of the four factors are conjugate to this one and share
  its cycle type, but their supports mark different corners.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations
from math import gcd
from typing import Iterable, Iterator, Sequence

import numpy as np

from .params import Params, ParamsA, ParamsB, ParamsC, ParamsD, diagram_of

logger = logging.getLogger(__name__)

Perm = tuple[int, ...]
CycleType = tuple[int, ...]
CanonicalForm = tuple[int, ...]

BRUTE_MIN_N = 4
BRUTE_MAX_N = 8


class Stratum(str, Enum):
    H11 = "H11"
    H2 = "H2"
    TORUS = "Torus"
    OTHER = "Other"


class DiagramKind(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"


class DisconnectedError(ValueError):
    """Raised by operations that need a connected surface."""


@dataclass(frozen=True)
class Origami:
    sigma: Perm
    tau: Perm

    def __post_init__(self) -> None:
        sigma = tuple(int(x) for x in self.sigma)
        tau = tuple(int(x) for x in self.tau)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "tau", tau)
        n = len(sigma)
        if n < 1 or len(tau) != n:
            raise ValueError("sigma and tau must be non-empty and of equal length")
        for name, perm in (("sigma", sigma), ("tau", tau)):
            if sorted(perm) != list(range(n)):
                raise ValueError(f"{name} is not a bijection of 0..{n - 1}")

    @property
    def n(self) -> int:
        return len(self.sigma)

    def relabel(self, gamma: Sequence[int]) -> Origami:
        """The same surface with square x renamed gamma[x]."""
        n = self.n
        s = [0] * n
        t = [0] * n
        for x in range(n):
            s[gamma[x]] = gamma[self.sigma[x]]
            t[gamma[x]] = gamma[self.tau[x]]
        return Origami(tuple(s), tuple(t))

    def one_indexed(self) -> tuple[list[int], list[int]]:
        """Permutations with squares numbered from 1, for display."""
        return [x + 1 for x in self.sigma], [x + 1 for x in self.tau]


def inverse(perm: Sequence[int]) -> Perm:
    out = [0] * len(perm)
    for i, x in enumerate(perm):
        out[x] = i
    return tuple(out)


def commutator(o: Origami) -> Perm:
    s, t = o.sigma, o.tau
    si, ti = inverse(s), inverse(t)
    return tuple(t[s[ti[si[x]]]] for x in range(o.n))


def cycles(perm: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        out.append(cyc)
    return out


def cycle_type(perm: Sequence[int]) -> CycleType:
    """Cycle lengths greater than one, in decreasing order."""
    return tuple(sorted((len(c) for c in cycles(perm) if len(c) > 1), reverse=True))


def stratum(o: Origami) -> Stratum:
    ct = cycle_type(commutator(o))
    if ct == (2, 2):
        return Stratum.H11
    if ct == (3,):
        return Stratum.H2
    if ct == ():
        return Stratum.TORUS
    return Stratum.OTHER


def is_connected(o: Origami) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in (o.sigma[x], o.tau[x]):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == o.n


def _require_connected(o: Origami) -> None:
    if not is_connected(o):
        raise DisconnectedError("operation needs a connected origami")


def _minimal_block_is_everything(s: Perm, t: Perm, k: int) -> bool:
    """Whether the smallest block containing 0 and k is the whole set.

    Union-find over the squares: join 0 and k, and whenever a and b are
    joined also join their images under each generator.
    """
    n = len(s)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parent[k] = 0
    pending = [(0, k)]
    classes = n - 1
    while pending:
        a, b = pending.pop()
        for g in (s, t):
            ra, rb = find(g[a]), find(g[b])
            if ra != rb:
                parent[rb] = ra
                classes -= 1
                pending.append((g[a], g[b]))
    return classes == 1


def is_primitive_group(o: Origami) -> bool:
    """Whether the monodromy group <sigma, tau> has no non-trivial blocks."""
    _require_connected(o)
    return all(_minimal_block_is_everything(o.sigma, o.tau, k) for k in range(1, o.n))


# -- cylinders ---------------------------------------------------------------


@dataclass(frozen=True)
class Cylinder:
    rows: tuple[tuple[int, ...], ...]  # bottom to top, columns aligned
    width: int
    height: int
    top_boundary_sc_count: int
    bottom_boundary_sc_count: int


@dataclass(frozen=True)
class CylinderDecomposition:
    cylinders: tuple[Cylinder, ...]

    def __len__(self) -> int:
        return len(self.cylinders)

    def shape(self) -> list[tuple[int, int]]:
        """Sorted (width, height) pairs."""
        return sorted((c.width, c.height) for c in self.cylinders)


def singular_squares(o: Origami) -> frozenset[int]:
    """Squares whose lower-left corner is a cone point."""
    c = commutator(o)
    return frozenset(x for x in range(o.n) if c[x] != x)


def cylinder_decomposition(o: Origami) -> CylinderDecomposition:
    """Horizontal cylinders: sigma-cycles (rows) stacked while the seam between them is clean."""
    _require_connected(o)
    s, t = o.sigma, o.tau
    sing = singular_squares(o)
    rows = cycles(s)
    row_of = {}
    for i, r in enumerate(rows):
        for x in r:
            row_of[x] = i
    # above[i] is the row glued on top of row i when that seam has no cone point
    above: dict[int, int] = {}
    for i, r in enumerate(rows):
        if not any(t[x] in sing for x in r):
            above[i] = row_of[t[r[0]]]
    below = {j: i for i, j in above.items()}

    cylinders = []
    used = [False] * len(rows)
    order = [i for i in range(len(rows)) if i not in below]
    if not order:
        # every seam is clean: a torus, stacked from an arbitrary row
        order = [0]
    for start in order:
        stack = [tuple(rows[start])]
        used[start] = True
        cur = start
        while cur in above and not used[above[cur]]:
            cur = above[cur]
            used[cur] = True
            # align columns: the square above column c is tau of column c
            stack.append(tuple(t[x] for x in stack[-1]))
        top = stack[-1]
        cylinders.append(
            Cylinder(
                rows=tuple(stack),
                width=len(top),
                height=len(stack),
                top_boundary_sc_count=sum(1 for x in top if t[x] in sing),
                bottom_boundary_sc_count=sum(1 for y in stack[0] if y in sing),
            )
        )
    if not all(used):
        raise RuntimeError("cylinder decomposition left rows unassigned")
    return CylinderDecomposition(tuple(cylinders))


def classify_diagram(o: Origami) -> DiagramKind:
    if stratum(o) is not Stratum.H11:
        raise ValueError("diagram classification applies to H(1,1) surfaces only")
    cyls = cylinder_decomposition(o).cylinders
    if len(cyls) == 1:
        return DiagramKind.A
    if len(cyls) == 3:
        return DiagramKind.D
    if len(cyls) == 2:
        counts = [c.top_boundary_sc_count for c in cyls] + [
            c.bottom_boundary_sc_count for c in cyls
        ]
        return DiagramKind.B if 1 in counts else DiagramKind.C
    raise RuntimeError(f"H(1,1) surface with {len(cyls)} cylinders")


# -- builders ----------------------------------------------------------------
#
# A surface is assembled from cylinders described by
# (width, height, bottom segments, top segments, shear).  Segments are
# (label, length) pairs listed left to right.  A top segment is glued to the
# bottom segment carrying the same label.  The shear shifts the top boundary
# to the right before the labels are read.  Each square of a cylinder is
# numbered row by row from the bottom-left.


@dataclass
class _CylSpec:
    width: int
    height: int
    bottom: list[tuple[str, int]]
    top: list[tuple[str, int]]
    shear: int = 0
    base: int = field(default=0, init=False)


def _glue(layouts: list[_CylSpec]) -> Origami:
    n = 0
    for c in layouts:
        c.base = n
        n += c.width * c.height
    where: dict[str, tuple[_CylSpec, int]] = {}
    for c in layouts:
        x = 0
        for label, length in c.bottom:
            where[label] = (c, x)
            x += length
        if x != c.width or sum(length for _, length in c.top) != c.width:
            raise ValueError("segment lengths do not add up to the cylinder width")
    sigma = [0] * n
    tau = [0] * n
    for c in layouts:
        w = c.width
        for row in range(c.height):
            for col in range(w):
                sq = c.base + row * w + col
                sigma[sq] = c.base + row * w + (col + 1) % w
                if row < c.height - 1:
                    tau[sq] = sq + w
                    continue
                pos = (col - c.shear) % w
                x = 0
                for label, length in c.top:
                    if pos < x + length:
                        dest, start = where[label]
                        tau[sq] = dest.base + (start + pos - x) % dest.width
                        break
                    x += length
    return Origami(tuple(sigma), tuple(tau))


def build_from_params(diagram: str | DiagramKind, params: Params) -> Origami:
    """Origami with the cylinder diagram, lengths, heights and shears in ``params``."""
    diagram = DiagramKind(diagram).value
    if diagram_of(params) != diagram:
        raise TypeError(f"parameters {params!r} do not describe diagram {diagram}")
    if not params.is_valid():
        raise ValueError(f"structurally invalid parameters {params!r}")
    t = params
    if isinstance(t, ParamsA):
        # One cylinder; the bottom reads j k l m and the top j m l k.
        layouts = [
            _CylSpec(
                t.width,
                t.p,
                [("j", t.j), ("k", t.k), ("l", t.l), ("m", t.m)],
                [("j", t.j), ("m", t.m), ("l", t.l), ("k", t.k)],
                t.alpha,
            )
        ]
    elif isinstance(t, ParamsB):
        # Long cylinder (bottom k, m2, l; top k, l, m1) and a short cylinder
        # of width m whose bottom is m1 and top is m2.
        layouts = [
            _CylSpec(
                t.k + t.l + t.m,
                t.p,
                [("k", t.k), ("m2", t.m), ("l", t.l)],
                [("k", t.k), ("l", t.l), ("m1", t.m)],
                t.alpha - t.l,
            ),
            _CylSpec(t.m, t.q, [("m1", t.m)], [("m2", t.m)], t.beta),
        ]
    elif isinstance(t, ParamsC):
        # Two cylinders sharing the saddle connections of length l; each
        # keeps its private one (k or m) glued to itself.
        layouts = [
            _CylSpec(t.k + t.l, t.p, [("k", t.k), ("l2", t.l)], [("k", t.k), ("l1", t.l)], t.alpha),
            _CylSpec(t.l + t.m, t.q, [("l1", t.l), ("m", t.m)], [("l2", t.l), ("m", t.m)], t.beta),
        ]
    elif isinstance(t, ParamsD):
        # Narrow cylinders of widths k and l on either side of a wide one of
        # width k + l.
        layouts = [
            _CylSpec(t.k, t.p, [("k1", t.k)], [("k2", t.k)], t.alpha),
            _CylSpec(
                t.k + t.l, t.q, [("k2", t.k), ("l2", t.l)], [("k1", t.k), ("l1", t.l)], t.beta
            ),
            _CylSpec(t.l, t.r, [("l1", t.l)], [("l2", t.l)], t.gamma),
        ]
    else:  # pragma: no cover - diagram_of already rejected other types
        raise TypeError(type(t).__name__)
    return _glue(layouts)


# -- canonical forms ---------------------------------------------------------


def _bfs_code(s: Perm, t: Perm, base: int) -> CanonicalForm | None:
    n = len(s)
    label = [-1] * n
    label[base] = 0
    order = [base]
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for y in (s[x], t[x]):
            if label[y] < 0:
                label[y] = len(order)
                order.append(y)
    if len(order) < n:
        return None
    return tuple(label[s[x]] for x in order) + tuple(label[t[x]] for x in order)


def canonical_form(o: Origami) -> CanonicalForm:
    """Lexicographically least BFS relabelling over all base squares.

    The result lists sigma then tau in the new labels (length 2n).  Two
    connected origamis are relabellings of each other exactly when their
    canonical forms agree.
    """
    best: CanonicalForm | None = None
    for base in range(o.n):
        code = _bfs_code(o.sigma, o.tau, base)
        if code is None:
            raise DisconnectedError("canonical form needs a connected origami")
        if best is None or code < best:
            best = code
    assert best is not None
    return best


def origami_from_canonical(code: CanonicalForm) -> Origami:
    n = len(code) // 2
    return Origami(tuple(code[:n]), tuple(code[n:]))


def dedup(stream: Iterable[Origami]) -> int:
    """Number of distinct surfaces in ``stream``."""
    return len({canonical_form(o) for o in stream})


# -- absolute periods ----------------------------------------------------------


@dataclass(frozen=True)
class Lattice2:
    """Sublattice of Z^2 with column basis (a, 0), (b, d) in Hermite normal form.

    For a rank-2 lattice a, d >= 1 and 0 <= b < a.  ``degenerate`` marks a
    lattice of rank below two; its basis fields are then meaningless zeros.
    """

    a: int
    b: int
    d: int
    degenerate: bool = False

    @property
    def index(self) -> int:
        return 0 if self.degenerate else self.a * self.d

    @property
    def basis(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a, 0), (self.b, self.d)

    def is_full(self) -> bool:
        return not self.degenerate and self.index == 1


def hermite_normal_form(vectors: Iterable[tuple[int, int]]) -> Lattice2:
    """Hermite normal form of the subgroup of Z^2 generated by ``vectors``."""
    vecs = [list(v) for v in vectors if v != (0, 0)]
    # Euclid on the second coordinate until one vector carries all of it.
    pivot: list[int] | None = None
    rest: list[list[int]] = []
    for v in vecs:
        if v[1] == 0:
            rest.append(v)
            continue
        if pivot is None:
            pivot = v
            continue
        a, b = pivot, v
        while b[1] != 0:
            q = a[1] // b[1]
            a = [a[0] - q * b[0], a[1] - q * b[1]]
            a, b = b, a
        pivot = a
        rest.append(b)
    horizontal = 0
    for v in rest:
        horizontal = gcd(horizontal, v[0])
    if pivot is None or horizontal == 0:
        return Lattice2(0, 0, 0, degenerate=True)
    if pivot[1] < 0:
        pivot = [-pivot[0], -pivot[1]]
    return Lattice2(horizontal, pivot[0] % horizontal, pivot[1])


def absolute_period_lattice(o: Origami) -> Lattice2:
    """Lattice of periods of closed curves through square centres.

    A spanning tree of the gluing graph fixes a position in Z^2 for every
    square; each non-tree edge closes one loop, whose displacement is a
    generator.
    """
    _require_connected(o)
    pos: list[tuple[int, int] | None] = [None] * o.n
    pos[0] = (0, 0)
    queue = [0]
    for x in queue:
        px, py = pos[x]  # type: ignore[misc]
        for y, step in ((o.sigma[x], (1, 0)), (o.tau[x], (0, 1))):
            if pos[y] is None:
                pos[y] = (px + step[0], py + step[1])
                queue.append(y)
    gens = []
    for x in range(o.n):
        px, py = pos[x]  # type: ignore[misc]
        for y, (dx, dy) in ((o.sigma[x], (1, 0)), (o.tau[x], (0, 1))):
            qx, qy = pos[y]  # type: ignore[misc]
            gens.append((px + dx - qx, py + dy - qy))
    return hermite_normal_form(gens)


# -- brute force ---------------------------------------------------------------


@dataclass
class BruteForceCensus:
    n: int
    h11: dict[str, int]
    h2: dict[str, int]
    sweep: str
    pairs_scanned: int = 0
    elapsed_seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "H11": dict(self.h11),
            "H2": dict(self.h2),
            "sweep": self.sweep,
            "pairs_scanned": self.pairs_scanned,
            "elapsed_seconds": round(self.elapsed_seconds, 3),
        }


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in _partitions(n - part, part):
            yield (part, *rest)


def class_representative(partition: Sequence[int]) -> Perm:
    """The permutation with consecutive cycles (0 .. a-1)(a .. a+b-1)...."""
    out = []
    start = 0
    for length in partition:
        out.extend(start + (i + 1) % length for i in range(length))
        start += length
    return tuple(out)


def _is_bfs_normal(s: Perm, t: Perm) -> bool:
    """Whether BFS from square 0 (sigma before tau) discovers squares in label order."""
    nxt = 1
    n = len(s)
    for x in range(n):
        if x >= nxt:
            return False  # BFS queue exhausted: disconnected
        for y in (s[x], t[x]):
            if y >= nxt:
                if y != nxt:
                    return False
                nxt += 1
    return nxt == n


class _TauTable:
    """All of S_n as an array, with inverses, for vectorized commutator filters."""

    def __init__(self, n: int) -> None:
        self.n = n
        self.perms = np.array(list(permutations(range(n))), dtype=np.intp)
        rows = np.arange(len(self.perms))[:, None]
        self.inv = np.empty_like(self.perms)
        self.inv[rows, self.perms] = np.arange(n)
        self.ident = np.arange(n)

    def filter(self, sigma: Perm) -> tuple[np.ndarray, np.ndarray]:
        """Row indices of tau with commutator type (2,2) and type (3,)."""
        s = np.array(sigma, dtype=np.intp)
        s_inv = np.array(inverse(sigma), dtype=np.intp)
        comm = np.take_along_axis(self.perms, s[self.inv[:, s_inv]], axis=1)
        moved = (comm != self.ident).sum(axis=1)
        sq = np.take_along_axis(comm, comm, axis=1)
        h11 = (moved == 4) & (sq == self.ident).all(axis=1)
        cube = np.take_along_axis(comm, sq, axis=1)
        h2 = (moved == 3) & (cube == self.ident).all(axis=1)
        return np.nonzero(h11)[0], np.nonzero(h2)[0]


_WORKER_TABLE: _TauTable | None = None


def _scan(n: int, sigmas: list[Perm], normal_only: bool) -> tuple[dict[str, set], int]:
    """Scan sigma x S_n; return canonical forms of primitive surfaces by kind."""
    global _WORKER_TABLE
    if _WORKER_TABLE is None or _WORKER_TABLE.n != n:
        _WORKER_TABLE = _TauTable(n)
    table = _WORKER_TABLE
    found: dict[str, set] = {k: set() for k in ("A", "B", "C", "D", "F", "G")}
    seen: set = set()
    scanned = 0
    for sigma in sigmas:
        scanned += len(table.perms)
        for rows, is_h11 in zip(table.filter(sigma), (True, False)):
            for i in rows:
                tau = tuple(int(v) for v in table.perms[i])
                if normal_only:
                    if not _is_bfs_normal(sigma, tau):
                        continue
                elif not is_connected(Origami(sigma, tau)):
                    continue
                o = Origami(sigma, tau)
                code = canonical_form(o)
                if code in seen:
                    continue
                seen.add(code)
                if not is_primitive_group(o):
                    continue
                if is_h11:
                    kind = classify_diagram(o).value
                else:
                    kind = "F" if len(cylinder_decomposition(o)) == 1 else "G"
                found[kind].add(code)
    return found, scanned


def brute_force_census(
    n: int,
    sweep: str = "full",
    workers: int = 1,
    allow_n8: bool = False,
) -> BruteForceCensus:
    """Count primitive H(1,1) surfaces by diagram and H(2) surfaces by cylinder count.

    ``sweep="full"`` scans every pair in S_n x S_n.  A labelled pair is only
    canonicalized when breadth-first search from square 0 meets the squares
    in label order.  Every surface has such a labelling (the one produced by
    :func:`canonical_form`), so no class is missed.  ``sweep="classes"``
    fixes sigma to one representative per cycle type, which also meets
    every class, and canonicalizes all connected survivors.
    """
    if not BRUTE_MIN_N <= n <= BRUTE_MAX_N:
        raise ValueError(f"brute force needs {BRUTE_MIN_N} <= n <= {BRUTE_MAX_N}, got {n}")
    if n == BRUTE_MAX_N and not allow_n8:
        raise ValueError("n = 8 is expensive; pass allow_n8=True to run it")
    if sweep == "full":
        sigmas = list(permutations(range(n)))
    elif sweep == "classes":
        sigmas = [class_representative(p) for p in _partitions(n)]
    else:
        raise ValueError(f"unknown sweep {sweep!r}")
    normal_only = sweep == "full"
    workers = max(1, int(workers))
    started = time.perf_counter()
    chunks = [sigmas[i::workers] for i in range(workers)] if workers > 1 else [sigmas]
    logger.info("brute force n=%d: %d sigma values, %d worker(s)", n, len(sigmas), workers)
    merged: dict[str, set] = {k: set() for k in ("A", "B", "C", "D", "F", "G")}
    scanned = 0
    if workers == 1:
        results = [_scan(n, sigmas, normal_only)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan, [n] * len(chunks), chunks, [normal_only] * len(chunks)))
    for found, count in results:
        scanned += count
        for key, codes in found.items():
            merged[key] |= codes
    elapsed = time.perf_counter() - started
    logger.info("brute force n=%d finished in %.1fs", n, elapsed)
    return BruteForceCensus(
        n=n,
        h11={k: len(merged[k]) for k in ("A", "B", "C", "D")},
        h2={k: len(merged[k]) for k in ("F", "G")},
        sweep=sweep,
        pairs_scanned=scanned,
        elapsed_seconds=elapsed,
    )


def default_workers() -> int:
    return os.cpu_count() or 1
