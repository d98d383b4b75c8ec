"""End-to-end acceptance checks, one test per criterion.

Each test prints a PASS or FAIL line in the terminal summary.
"""

from __future__ import annotations

import io
import math
import statistics
from contextlib import redirect_stdout
from fractions import Fraction

from sqtiled import cli, formulas, origami, params, verify


def test_criterion_1_formulas_match_parameter_enumeration(acceptance):
    with acceptance.criterion(1, "closed forms vs parameter enumeration") as info:
        tables = formulas.CensusTables(300)
        for n in range(4, 301):
            row = formulas.census_row(n, tables)
            want = (row.a, row.b, row.c, row.d)
            modes = ("explicit", "analytic") if n <= 24 else ("analytic",)
            for mode in modes:
                got = tuple(params.count_by_enumeration(x, n, mode) for x in params.DIAGRAMS)
                assert got == want, f"n={n} {mode}: {got} != {want}"
        info.append("explicit 4..24, analytic 4..300")


def test_criterion_2_brute_force_sweep(acceptance):
    expected_h11 = {
        4: (0, 3, 1, 0),
        5: (5, 11, 6, 2),
        7: (35, 73, 40, 12),
    }
    expected_h2 = {4: (4, 5), 5: (10, 17)}
    with acceptance.criterion(2, "exhaustive S_n x S_n sweep, n = 4..7") as info:
        for n in range(4, 8):
            census = origami.brute_force_census(n, sweep="full", workers=origami.default_workers())
            got = tuple(census.h11[x] for x in params.DIAGRAMS)
            if n in expected_h11:
                assert got == expected_h11[n], f"n={n}: {got}"
            else:
                assert sum(got) == 48, f"n=6 total {sum(got)}"
            if n in expected_h2:
                assert (census.h2["F"], census.h2["G"]) == expected_h2[n], f"n={n}: {census.h2}"
            info.append(f"n={n} {got} {census.elapsed_seconds:.1f}s")


def test_criterion_3_primitivity_equivalence(acceptance):
    with acceptance.criterion(3, "gcd test, block primitivity and AbsPer agree for n <= 12") as info:
        total = 0
        for n in range(4, 13):
            for diagram in params.DIAGRAMS:
                for t in params.iter_params(diagram, n, unique=False):
                    o = origami.build_from_params(diagram, t)
                    by_gcd = params.is_primitive_params(diagram, t)
                    by_group = origami.is_primitive_group(o)
                    by_lattice = origami.absolute_period_lattice(o).is_full()
                    assert by_gcd == by_group == by_lattice, f"{diagram} {t}"
                    total += 1
        info.append(f"{total} tuples, 0 discrepancies")


def test_criterion_4_identity_suites(acceptance):
    with acceptance.criterion(4, "identity suites") as info:
        results = [
            verify.suite_arith_identities(2000),
            verify.suite_intermediate_sums(4, 300),
            verify.suite_shear_lemma(),
            verify.suite_quadruple_lemma(60),
        ]
        for res in results:
            assert res.passed, f"{res.summary()}: {res.failures[:3]}"
        info.append(", ".join(f"{r.name} {r.checks}" for r in results))


def test_criterion_5_structural_identities(acceptance):
    with acceptance.criterion(5, "A+B+C+D = E and 4C = E for 4 <= n <= 5000"):
        rows = formulas.census_rows(4, 5000)
        assert len(rows) == 4997
        for r in rows:
            assert r.a + r.b + r.c + r.d == r.e, f"sum fails at {r.n}"
            assert 4 * r.c == r.e, f"4C != E at {r.n}"


def test_criterion_6_density_limits(acceptance):
    with acceptance.criterion(6, "density limits and convergence") as info:
        lim = formulas.limit_densities()
        assert 0.4534 <= lim.limit_b <= 0.4535, lim.limit_b
        assert 0.0465 <= lim.limit_d <= 0.0466, lim.limit_d
        n = 10**6
        ratio_a = formulas.count_A(n) / formulas.count_E(n)
        assert abs(ratio_a - 0.25) < 1e-3, ratio_a
        tables = formulas.CensusTables(2100)
        mean_b = statistics.fmean(
            float(formulas.census_row(m, tables).ratios()[1]) for m in range(2000, 2101)
        )
        assert abs(mean_b - lim.limit_b) < 0.02, mean_b
        info.append(f"limit_b={lim.limit_b:.6f} limit_d={lim.limit_d:.6f}")
        info.append(f"A/E(10^6)={ratio_a:.6f} mean B/E={mean_b:.6f}")


def _densities_output(tmp_path, name: str) -> bytes:
    path = tmp_path / name
    code = cli.main(["densities", "--n-min", "4", "--n-max", "101", "--out", str(path)])
    assert code == 0
    return path.read_bytes()


def test_criterion_7_density_series(acceptance, tmp_path):
    with acceptance.criterion(7, "densities 4..101 output"):
        first = _densities_output(tmp_path, "a.csv")
        second = _densities_output(tmp_path, "b.csv")
        assert first == second
        buf = io.StringIO()
        with redirect_stdout(buf):
            assert cli.main(["densities", "--n-min", "4", "--n-max", "101"]) == 0
        assert buf.getvalue().encode() == first
        lines = first.decode().split("\n")
        assert lines[0] == "n,rA,rB,rC,rD" and lines[-1] == ""
        body = lines[1:-1]
        assert len(body) == 98
        tables = formulas.CensusTables(101)
        for line in body:
            n, *ratios = line.split(",")
            assert ratios[2] == "0.25", line
            exact = formulas.census_row(int(n), tables).ratios()
            assert sum(exact) == Fraction(1)
            assert math.isclose(sum(float(x) for x in ratios), 1.0, abs_tol=1e-12), line
