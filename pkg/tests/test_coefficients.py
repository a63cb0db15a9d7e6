"""Coefficient-pipeline tests: c_{k,l}, beta_{k,n}, alpha_n, asymptotics."""

import math

import mpmath as mp
import pytest

from zetamax.coefficients import (
    NonConvergenceError,
    alpha,
    alpha_via_beta,
    asymptotic_value,
    beta,
    build_alpha_set,
    build_c_table,
    format_alpha,
    optimal_truncation_eta,
    optimal_truncation_eta_roots,
)
from zetamax.series import stieltjes

# Published reference values for the expansion coefficients (two decimals up
# to n = 12, three significant figures beyond).
ALPHA_REFERENCE = {
    1: "1.02", 2: "-1.63", 3: "3.24", 4: "-6.66", 5: "15.95", 6: "-34.23",
    7: "106.90", 8: "-124.52", 9: "1485.29", 10: "6209.69", 11: "83003.56",
    12: "851308.97", 13: "1.04e+07", 14: "1.35e+08", 15: "1.89e+09",
    16: "2.83e+10", 17: "4.53e+11", 18: "7.70e+12",
}


class TestCTable:
    def test_closed_forms(self, c_table):
        with mp.workdps(50):
            g0 = stieltjes(0)
            g1 = stieltjes(1)
            for k in range(1, c_table.K_max + 1):
                assert abs(c_table.value(k, 0) - 1) < mp.mpf("1e-45")
                assert abs(c_table.value(k, 1) - (-1 - (k - 3) * g0)) < mp.mpf("1e-43")
                closed = (1 + (k - 3) * g0
                          + mp.mpf(k - 1) * (k - 4) / 2 * g0 ** 2
                          + 2 * (k - 3) * g1)
                assert abs(c_table.value(k, 2) - closed) < mp.mpf("1e-41")

    def test_c12_value(self, c_table):
        # k = 1 makes the closed form collapse to 1 - 2 gamma0 - 4 gamma1
        with mp.workdps(50):
            expected = 1 - 2 * stieltjes(0) - 4 * stieltjes(1)
            assert abs(c_table.value(1, 2) - expected) < mp.mpf("1e-45")
            assert abs(float(expected) - 0.1368320) < 1e-6

    def test_out_of_range(self, c_table):
        with pytest.raises(IndexError):
            c_table.value(0, 0)
        with pytest.raises(IndexError):
            c_table.value(1, c_table.L_max + 1)

    def test_small_rebuild_matches(self, c_table):
        small = build_c_table(K_max=3, L_max=5, digits=30)
        for k in range(1, 4):
            for l in range(0, 6):
                assert abs(small.value(k, l) - c_table.value(k, l)) < mp.mpf("1e-25")


class TestBeta:
    def test_branches_consistent_with_alpha(self, c_table):
        # the n >= 1 alpha double sum and the per-k beta closed forms are
        # independent codepaths; agreement to 10 significant digits
        with mp.workdps(50):
            for n in range(-2, 21):
                a = alpha(n, c_table)
                b = alpha_via_beta(n, c_table)
                assert abs(a - b) <= mp.mpf("1e-10") * max(abs(a), 1), "n=%d" % n

    def test_beta_guards(self, c_table):
        with pytest.raises(IndexError):
            beta(0, 0, c_table)
        with pytest.raises(IndexError):
            beta(1, -2, c_table)
        with pytest.raises(IndexError):
            beta(1, c_table.L_max - 1, c_table)


class TestAlpha:
    def test_closed_forms(self, c_table):
        with mp.workdps(50):
            e2 = mp.e ** 2
            g0 = stieltjes(0)
            g1 = stieltjes(1)
            assert abs(alpha(-2, c_table) - (e2 - 5) / 2) < mp.mpf("1e-20")
            assert abs(alpha(-1, c_table) - (5 - e2 - 10 * g0 + 2 * e2 * g0)) < mp.mpf("1e-20")
            a0 = (12 * g1 - 4 * e2 * g1 - 5 + e2 + 10 * g0 - 2 * e2 * g0 - 4 * g0 ** 2)
            assert abs(alpha(0, c_table) - a0) < mp.mpf("1e-20")

    def test_published_values(self, alpha_set):
        for n, formatted in ALPHA_REFERENCE.items():
            assert format_alpha(n, alpha_set.value(n)) == formatted, "n=%d" % n

    def test_nonconvergence_raises(self, c_table):
        with pytest.raises(NonConvergenceError):
            alpha(5, c_table, tail_tol=mp.mpf(0))

    def test_alpha_set_metadata(self, alpha_set):
        assert alpha_set.N_max == 20
        assert 10 <= alpha_set.k_truncation_used <= 60
        # the recorded tail is the largest discarded term over all n; compare
        # against the largest coefficient, where that maximum is attained
        largest = max(abs(alpha_set.value(n)) for n in range(-2, alpha_set.N_max + 1))
        assert alpha_set.tail_bound / largest < mp.mpf("1e-15")


class TestAsymptoticValue:
    def test_leading_term_only(self, alpha_set):
        T = 1000.0
        L = math.log(T / (2 * math.pi))
        expected = T / (2 * math.pi) * float(alpha_set.value(-2)) * L * L
        assert asymptotic_value(T, alpha_set, -2) == pytest.approx(expected, rel=1e-12)

    def test_terms_accumulate(self, alpha_set):
        T = 1000.0
        L = math.log(T / (2 * math.pi))
        v1 = asymptotic_value(T, alpha_set, 1)
        v2 = asymptotic_value(T, alpha_set, 2)
        assert v2 - v1 == pytest.approx(T / (2 * math.pi) * float(alpha_set.value(2)) / L ** 2,
                                        rel=1e-9)

    def test_domain_guards(self, alpha_set):
        with pytest.raises(ValueError):
            asymptotic_value(6.0, alpha_set, 0)
        with pytest.raises(IndexError):
            asymptotic_value(1000.0, alpha_set, alpha_set.N_max + 1)
        with pytest.raises(IndexError):
            asymptotic_value(1000.0, alpha_set, -3)


class TestOptimalTruncation:
    def test_eta_roots(self):
        small, large = optimal_truncation_eta_roots()
        assert abs(small - 0.186) < 1e-3
        assert abs(large - 2.155) < 1e-3
        assert optimal_truncation_eta() == small

    def test_roots_satisfy_equation(self):
        for eta in optimal_truncation_eta_roots():
            assert abs(eta * math.log(eta) - eta + 0.5) < 1e-12


class TestFormatting:
    def test_two_decimals_until_12(self):
        assert format_alpha(12, 851308.9684) == "851308.97"
        assert format_alpha(0, -0.42328) == "-0.42"

    def test_scientific_beyond_13(self):
        assert format_alpha(13, 10401234.0) == "1.04e+07"
        assert format_alpha(18, 7.7e12) == "7.70e+12"
