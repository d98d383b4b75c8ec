from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from sqtiled import arith, formulas
from sqtiled.formulas import CensusTables


@pytest.fixture(scope="module")
def tables() -> CensusTables:
    return CensusTables(2100)


@pytest.mark.parametrize(
    "n,expected",
    [
        (4, (0, 3, 1, 0, 4)),
        (5, (5, 11, 6, 2, 24)),
        (7, (35, 73, 40, 12, 160)),
    ],
)
def test_census_examples(tables, n, expected):
    row = formulas.census_row(n, tables)
    assert (row.a, row.b, row.c, row.d, row.e) == expected


def test_e_at_eight(tables):
    assert formulas.count_E(8) == 240
    assert formulas.count_E(8, tables) == 240


def test_a_at_twelve_without_tables():
    assert formulas.count_A(12) == 312


def test_conv_term_examples(tables):
    conv = tables.conv
    assert conv[1] == 0
    assert conv[4] == 24
    assert conv[5] == 78
    assert conv[7] == 324


def test_conv_weight_is_inverse_of_sigma2(tables):
    inv = tables.sigma2_inverse
    prod = arith.dirichlet_convolve(inv, tables.sigma2)
    assert prod[1] == 1 and all(prod[m] == 0 for m in range(2, 2101))
    # agrees with the pointwise product mu.sigma_2 exactly on squarefree arguments
    pointwise = arith.pointwise_mul(tables.mobius, tables.sigma2)
    for m in range(1, 2101):
        if tables.mobius[m] != 0:
            assert inv[m] == pointwise[m]
    assert inv[4] == 4 and pointwise[4] == 0


def test_pointwise_reading_disagrees_with_enumeration(tables):
    # Reading the weight as the pointwise product gives B(8) = 118, D(8) = 14;
    # enumeration and brute force both give 122 and 10.
    s1s2 = arith.additive_convolve(tables.sigma1, tables.sigma2)
    literal = arith.dirichlet_convolve(arith.pointwise_mul(tables.mobius, tables.sigma2), s1s2)
    assert formulas.count_B(8, literal, tables) == 118
    assert formulas.count_B(8, tables.conv, tables) == 122
    assert formulas.count_D(8, tables.conv, tables) == 10


@pytest.mark.parametrize("n,expected", [(3, (1, 2, 3)), (4, (4, 5, 9))])
def test_h2_examples(n, expected):
    row = formulas.count_H2(n)
    assert (row.f, row.g, row.h) == expected


def test_h2_f_at_five():
    assert formulas.count_H2(5).f == 10
    assert formulas.count_H2(5).g == 17


def test_small_n_counts_are_zero(tables):
    for n in (1, 2, 3):
        row = formulas.census_row(n, tables)
        assert (row.a, row.b, row.c, row.d, row.e) == (0, 0, 0, 0, 0)
    assert formulas.count_H2(2).h == 0


def test_structural_identities(tables):
    for n in range(4, 2101):
        row = formulas.census_row(n, tables)
        assert row.a + row.b + row.c + row.d == row.e
        assert 4 * row.c == row.e
        assert min(row.a, row.b, row.c, row.d) >= 0 and row.e > 0
        h2 = formulas.count_H2(n, tables)
        assert h2.f + h2.g == h2.h


def test_b_coefficient_forms_agree():
    for n in range(1, 500):
        assert Fraction((2 * n + 9) * (n - 2), 24) == Fraction(n * n, 12) + Fraction(5 * n, 24) - Fraction(3, 4)


def test_e_two_ways(tables):
    mu_id2 = arith.dirichlet_convolve(tables.mobius, arith.tabulate("id", 2, tables.n_max))
    for n in range(4, 2101):
        assert (n - 2) * (n - 3) * mu_id2[n] == 6 * formulas.count_E(n, tables)


def test_ratios_are_exact(tables):
    row = formulas.census_row(4, tables)
    assert row.ratios() == (Fraction(0), Fraction(3, 4), Fraction(1, 4), Fraction(0))
    assert row.as_dict()["rB"] == [3, 4]


def test_intermediate_examples(tables):
    assert formulas.intermediate_closed("X", 4, tables) == 8
    assert formulas.intermediate_closed("Y", 3, tables) == 2
    assert formulas.intermediate_closed("W", 1, tables) == Fraction(-1, 12)
    with pytest.raises(ValueError):
        formulas.intermediate_closed("Z", 4, tables)


def test_exact_div_reports_bugs():
    with pytest.raises(formulas.DivisibilityError):
        formulas.exact_div(7, 2)


def test_limit_densities_against_mpmath():
    lim = formulas.limit_densities()
    mpmath.mp.dps = 30
    assert abs(lim.zeta3 - float(mpmath.zeta(3))) < 1e-12
    assert abs(lim.zeta5 - float(mpmath.zeta(5))) < 1e-12
    assert abs(lim.zeta2 - float(mpmath.zeta(2))) < 1e-12
    assert lim.limit_a == 0.25 and lim.limit_c == 0.25
    assert 0.4534 <= lim.limit_b <= 0.4535
    assert 0.0465 <= lim.limit_d <= 0.0466
    assert abs(lim.limit_a + lim.limit_b + lim.limit_c + lim.limit_d - 1) < 1e-10


def test_main_term_ratio(tables):
    lim = formulas.limit_densities()
    c = lim.zeta2 * lim.zeta3 / (12 * lim.zeta5)
    mpmath.mp.dps = 30
    exact = mpmath.zeta(2) * mpmath.zeta(3) / (12 * mpmath.zeta(5))
    assert abs(c - float(exact)) < 1e-12
    assert abs(c - 0.15891) < 1e-4
    s1s2 = arith.additive_convolve(tables.sigma1, tables.sigma2)
    assert abs(s1s2[2000] / tables.sigma4[2000] - c) < 0.02
    assert formulas.asym_main_term_sigma1_sigma2(2000, tables) == pytest.approx(c * tables.sigma4[2000])
    assert formulas.asym_main_term_sigma1_sigma2(12) == pytest.approx(c * sum(d**4 for d in (1, 2, 3, 4, 6, 12)))


def test_gamma_ratio():
    from math import gamma

    assert gamma(2) * gamma(3) / gamma(5) == pytest.approx(1 / 12)
