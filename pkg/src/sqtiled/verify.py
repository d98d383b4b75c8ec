"""Verification suites comparing every formula against an independent oracle.

Each suite returns a :class:`SuiteResult` counting the individual checks it
ran and recording a message per failure.  The CLI ``verify`` command and the
acceptance tests drive these.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Callable

from . import arith, formulas, origami, params

logger = logging.getLogger(__name__)

MAX_FAILURE_MESSAGES = 20


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    failed: int = 0

    def check(self, ok: bool, message: Callable[[], str] | str) -> bool:
        self.checks += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_FAILURE_MESSAGES:
                self.failures.append(message() if callable(message) else message)
        return ok

    @property
    def passed(self) -> bool:
        return self.failed == 0 and self.checks > 0

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checks} checks, {self.failed} failed"


# -- arithmetic ---------------------------------------------------------------


def suite_arith_identities(n_max: int = 2000) -> SuiteResult:
    res = SuiteResult("arith-identities")
    sieve = arith.SpfSieve.build(n_max)

    def tab(which: str, k: int = 0) -> arith.ArithTable:
        return arith.tabulate(which, k, n_max, sieve)

    mu, one, eps = tab("mobius"), tab("one"), tab("eps")
    phi = tab("phi")

    def same(name: str, got: arith.ArithTable, want: arith.ArithTable) -> None:
        for m in range(1, n_max + 1):
            res.check(got[m] == want[m], lambda m=m: f"{name} fails at {m}: {got[m]} != {want[m]}")

    same("mu * 1 = eps", arith.dirichlet_convolve(mu, one), eps)
    for k in range(1, 5):
        same(f"mu * sigma_{k} = Id_{k}", arith.dirichlet_convolve(mu, tab("sigma", k)), tab("id", k))
    for k in (1, 2):
        same(f"mu * Id_{k} = J_{k}", arith.dirichlet_convolve(mu, tab("id", k)), tab("jordan", k))
    same("phi * (Id_1 mu) = mu", arith.dirichlet_convolve(phi, arith.pointwise_mul(tab("id", 1), mu)), mu)

    # Sum over d | m of mu(d) f(d) = prod over p | m of (1 - f(p)), for m <= 1000.
    sigma1 = tab("sigma", 1)
    for m in range(1, min(n_max, 1000) + 1):
        divs = [d for d in range(1, m + 1) if m % d == 0]
        primes = [p for p, _ in sieve.factorize(m)]
        lhs = sum(mu[d] * sigma1[d] for d in divs)
        rhs = 1
        for p in primes:
            rhs *= 1 - sigma1[p]
        res.check(lhs == rhs, lambda m=m: f"Mobius product (sigma_1) fails at {m}")
        # f = 1/Id_1, cleared: sum mu(d) (m/d) * prod p == m * prod (p - 1)
        lhs = sum(mu[d] * (m // d) for d in divs)
        prod_p = prod_pm1 = 1
        for p in primes:
            prod_p *= p
            prod_pm1 *= p - 1
        res.check(lhs * prod_p == m * prod_pm1, lambda m=m: f"Mobius product (1/Id) fails at {m}")

    s11 = arith.additive_convolve(sigma1, sigma1)
    s3 = tab("sigma", 3)
    for m in range(1, n_max + 1):
        res.check(
            12 * s11[m] == 5 * s3[m] + sigma1[m] - 6 * m * sigma1[m],
            lambda m=m: f"sigma_1 additive square identity fails at {m}",
        )

    j2 = tab("jordan", 2)
    for m in range(2, n_max + 1):
        res.check(
            608 * m * m < 1000 * j2[m] <= 1000 * m * m,
            lambda m=m: f"J_2 bounds fail at {m}",
        )
    for m in range(1, n_max + 1):
        res.check(arith.jordan(2, m) == j2[m], lambda m=m: f"J_2 product formula differs at {m}")
    return res


def suite_intermediate_sums(n_min: int = 4, n_max: int = 300) -> SuiteResult:
    res = SuiteResult("intermediate-sums")
    tables = formulas.CensusTables(n_max)
    for name in formulas.INTERMEDIATE_NAMES:
        for n in range(max(1, n_min), n_max + 1):
            direct = params.intermediate_direct(name, n)
            closed = formulas.intermediate_closed(name, n, tables)
            res.check(direct == closed, lambda: f"{name}({n}): direct {direct} != closed {closed}")
    # Below n = 4 the two sides are compared but only reported.
    small = [
        f"{name}({n})"
        for name in formulas.INTERMEDIATE_NAMES
        for n in range(1, 4)
        if params.intermediate_direct(name, n) != formulas.intermediate_closed(name, n, tables)
    ]
    res.notes.append("small-n mismatches: " + (", ".join(small) if small else "none"))
    return res


def suite_shear_lemma(max_height: int = 5, max_side: int = 12, offset: int = 3) -> SuiteResult:
    res = SuiteResult("shear-lemma")
    for p in range(1, max_height + 1):
        for q in range(1, max_height + 1):
            if gcd(p, q) != 1:
                continue
            for k in range(1, max_side + 1):
                for l in range(1, max_side + 1):
                    want = params.shear_count_formula(p, q, k, l)
                    for b1 in range(-offset, offset + 1):
                        for b2 in range(-offset, offset + 1):
                            got = params.shear_count_brute(p, q, k, l, b1, b2)
                            res.check(
                                got == want,
                                lambda: f"shear count p={p} q={q} k={k} l={l} offset=({b1},{b2}): {got} != {want}",
                            )
    # The B count uses gcd(k+l, m) where the derivation gives gcd(k+l+m, m).
    for s in range(2, 40):
        for m in range(1, 40):
            res.check(gcd(s + m, m) == gcd(s, m), f"gcd shift fails for {s}, {m}")
    return res


def suite_quadruple_lemma(n_max: int = 60) -> SuiteResult:
    res = SuiteResult("quadruple-lemma")
    for n in range(4, n_max + 1):
        for d in range(1, n + 1):
            if n % d:
                continue
            want = params.quadruple_count(n, d)
            got = params.quadruple_count_brute(n, d)
            res.check(got == want, lambda: f"quadruples n={n} d={d}: {got} != {want}")
    return res


# -- parameter oracle -----------------------------------------------------------


def suite_param_oracle(
    n_min: int = 4, n_max: int = 300, explicit_max: int = params.EXPLICIT_CAP, omega_max: int = 200
) -> SuiteResult:
    res = SuiteResult("param-oracle")
    n_min = max(4, n_min)
    tables = formulas.CensusTables(max(n_max, 4))
    for n in range(n_min, n_max + 1):
        row = formulas.census_row(n, tables)
        want = dict(zip(params.DIAGRAMS, (row.a, row.b, row.c, row.d)))
        modes = ["analytic"] if n > explicit_max else ["explicit", "analytic"]
        for mode in modes:
            if mode == "analytic" and n > params.ANALYTIC_CAP:
                continue
            for diagram in params.DIAGRAMS:
                got = params.count_by_enumeration(diagram, n, mode)
                res.check(
                    got == want[diagram],
                    lambda: f"{diagram}({n}) {mode}: enumeration {got} != formula {want[diagram]}",
                )
        res.check(row.a + row.b + row.c + row.d == row.e, f"A+B+C+D != E at {n}")
        res.check(4 * row.c == row.e, f"4C != E at {n}")
        if n <= omega_max:
            got = params.count_omega(n)
            res.check(got == row.a, lambda: f"|Omega|({n}) = {got} != A = {row.a}")
    return res


# -- surfaces -------------------------------------------------------------------


def expected_shape(diagram: str, t: params.Params) -> list[tuple[int, int]]:
    if diagram == "A":
        shape = [(t.width, t.p)]
    elif diagram == "B":
        shape = [(t.k + t.l + t.m, t.p), (t.m, t.q)]
    elif diagram == "C":
        shape = [(t.k + t.l, t.p), (t.l + t.m, t.q)]
    else:
        shape = [(t.k, t.p), (t.k + t.l, t.q), (t.l, t.r)]
    return sorted(shape)


def suite_builder_contract(n_min: int = 4, n_max: int = 12, dedup_max: int = 12) -> SuiteResult:
    """Every structurally valid tuple builds an H(1,1) surface of the right shape and kind."""
    res = SuiteResult("builder-contract")
    tables = formulas.CensusTables(max(n_max, dedup_max, 4))
    for n in range(max(4, n_min), n_max + 1):
        for diagram in params.DIAGRAMS:
            for t in params.iter_params(diagram, n, unique=False):
                o = origami.build_from_params(diagram, t)
                res.check(origami.stratum(o) is origami.Stratum.H11, lambda: f"{t}: not in H(1,1)")
                res.check(
                    origami.cylinder_decomposition(o).shape() == expected_shape(diagram, t),
                    lambda: f"{t}: cylinder widths/heights differ from parameters",
                )
                res.check(
                    origami.classify_diagram(o).value == diagram,
                    lambda: f"{t}: classified as {origami.classify_diagram(o).value}",
                )
                res.check(
                    origami.is_primitive_group(o) == params.is_primitive_params(diagram, t),
                    lambda: f"{t}: block test and gcd test disagree",
                )
    for n in range(max(4, n_min), dedup_max + 1):
        row = formulas.census_row(n, tables)
        want = dict(zip(params.DIAGRAMS, (row.a, row.b, row.c, row.d)))
        for diagram in params.DIAGRAMS:
            forms = {
                origami.canonical_form(origami.build_from_params(diagram, t))
                for t in params.iter_params(diagram, n)
                if params.is_primitive_params(diagram, t)
            }
            res.check(
                len(forms) == want[diagram],
                lambda: f"{diagram}({n}): {len(forms)} distinct surfaces != formula {want[diagram]}",
            )
    return res


def suite_absper(n_min: int = 4, n_max: int = 12) -> SuiteResult:
    res = SuiteResult("absper")
    for n in range(max(4, n_min), n_max + 1):
        for diagram in params.DIAGRAMS:
            for t in params.iter_params(diagram, n, unique=False):
                lat = origami.absolute_period_lattice(origami.build_from_params(diagram, t))
                res.check(
                    lat.is_full() == params.is_primitive_params(diagram, t),
                    lambda: f"{t}: lattice index {lat.index} vs gcd test",
                )
        torus = origami.Origami(tuple((i + 1) % n for i in range(n)), tuple(range(n)))
        lat = origami.absolute_period_lattice(torus)
        res.check(lat.basis == ((n, 0), (0, 1)), lambda: f"torus n={n}: basis {lat.basis}")
    return res


def suite_bruteforce(
    n_min: int = 4, n_max: int = 6, workers: int = 1, allow_n8: bool = False, sweep: str = "full"
) -> SuiteResult:
    res = SuiteResult("bruteforce")
    tables = formulas.CensusTables(max(n_max, 4))
    for n in range(max(4, n_min), n_max + 1):
        census = origami.brute_force_census(n, sweep=sweep, workers=workers, allow_n8=allow_n8)
        row = formulas.census_row(n, tables)
        h2 = formulas.count_H2(n, tables)
        want = {"A": row.a, "B": row.b, "C": row.c, "D": row.d}
        for key, value in want.items():
            got = census.h11[key]
            res.check(got == value, lambda: f"n={n} diagram {key}: brute {got} != formula {value}")
        res.check(census.h2["F"] == h2.f, lambda: f"n={n}: F brute {census.h2['F']} != {h2.f}")
        res.check(census.h2["G"] == h2.g, lambda: f"n={n}: G brute {census.h2['G']} != {h2.g}")
        res.notes.append(
            f"n={n}: H11 {census.h11} H2 {census.h2} ({census.elapsed_seconds:.1f}s)"
        )
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "arith-identities": suite_arith_identities,
    "intermediate-sums": suite_intermediate_sums,
    "shear-lemma": suite_shear_lemma,
    "quadruple-lemma": suite_quadruple_lemma,
    "param-oracle": suite_param_oracle,
    "builder-contract": suite_builder_contract,
    "absper": suite_absper,
    "bruteforce": suite_bruteforce,
}
