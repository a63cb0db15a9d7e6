"""Laurent-series arithmetic and Stieltjes-constant tests."""

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from zetamax.series import (
    LaurentSeries,
    NonInvertibleError,
    PrecisionError,
    SeriesError,
    TruncationUnderflowError,
    UnsupportedIndexError,
    laurent,
    one_over_s_series,
    one_series,
    series_add,
    series_diff,
    series_inv,
    series_mul,
    series_neg,
    series_pow,
    series_scale,
    stieltjes,
    stieltjes_computed,
    load_stieltjes_table,
    zero_series,
    zeta_series,
)


def approx_equal(a, b, tol="1e-40"):
    return abs(mp.mpf(a) - mp.mpf(b)) < mp.mpf(tol)


def series_equal(a, b, tol="1e-40"):
    lo = min(a.lowest_order, b.lowest_order)
    hi = min(a.trunc_order, b.trunc_order)
    return all(approx_equal(a.coefficient(e), b.coefficient(e), tol) for e in range(lo, hi + 1))


# ---------------------------------------------------------------------------
# construction and normalization
# ---------------------------------------------------------------------------

class TestConstruction:
    def test_invariant_enforced(self):
        with pytest.raises(SeriesError):
            LaurentSeries(0, (mp.mpf(1), mp.mpf(2)), 5)

    def test_empty_window_rejected(self):
        with pytest.raises(SeriesError):
            LaurentSeries(0, (), 0)

    def test_leading_zero_stripped_keeps_trunc(self):
        s = laurent(-1, [0, 3, 4])
        assert s.lowest_order == 0
        assert s.trunc_order == 1
        assert s.coeffs == (mp.mpf(3), mp.mpf(4))

    def test_all_zero_window_keeps_truncation(self):
        s = laurent(2, [0, 0, 0])
        assert s.is_zero()
        assert s == zero_series(4)
        assert s.trunc_order == 4

    def test_coefficient_lookup(self):
        s = laurent(-2, [1, 2, 3])
        assert s.coefficient(-2) == 1
        assert s.coefficient(-3) == 0
        with pytest.raises(TruncationUnderflowError):
            s.coefficient(1)


# ---------------------------------------------------------------------------
# arithmetic
# ---------------------------------------------------------------------------

class TestArithmetic:
    def test_add_windows_intersect(self):
        a = laurent(-1, [1, 1, 1])     # trusted through exponent 1
        b = laurent(0, [2, 2, 2, 2])   # trusted through exponent 3
        c = series_add(a, b)
        assert c.trunc_order == 1
        assert c.coefficient(-1) == 1
        assert c.coefficient(0) == 3

    def test_add_zero_identity(self):
        a = laurent(-1, [1, 2])
        assert series_add(a, zero_series()) == a
        assert series_add(zero_series(), a) == a

    def test_neg_and_scale(self):
        a = laurent(0, [1, -2])
        assert series_add(a, series_neg(a)).is_zero()
        assert series_scale(a, 3).coeffs == (mp.mpf(3), mp.mpf(-6))
        assert series_scale(a, 0).is_zero()

    def test_mul_truncation_rule(self):
        # lowest orders a0 = -1, b0 = 2; truncations p = 1, q = 4
        a = laurent(-1, [1, 1, 1])
        b = laurent(2, [1, 0, 1])
        c = series_mul(a, b)
        assert c.lowest_order == 1
        assert c.trunc_order == min(1 + 2, 4 + (-1))

    def test_mul_known_product(self):
        # (1/(s-1) + 1) * ((s-1) - (s-1)^2) = 1 - (s-1)^2 ... within the window
        a = laurent(-1, [1, 1, 0])
        b = laurent(1, [1, -1, 0])
        c = series_mul(a, b)
        assert c.coefficient(0) == 1
        assert c.coefficient(1) == 0
        assert c.coefficient(2) == -1

    def test_mul_zero_annihilates(self):
        assert series_mul(laurent(-3, [5]), zero_series()).is_zero()

    def test_inverse_of_zero_raises(self):
        with pytest.raises(NonInvertibleError):
            series_inv(zero_series())

    def test_inverse_round_trip(self):
        a = laurent(-1, [2, 1, -3, 4])
        prod = series_mul(a, series_inv(a))
        assert series_equal(prod, one_series(prod.trunc_order))

    def test_pow_zero_is_unit(self):
        a = laurent(-1, [1, 2, 3])
        assert series_equal(series_pow(a, 0), one_series(2))

    def test_pow_matches_repeated_mul(self):
        a = laurent(0, [1, 1, 1, 1])
        assert series_pow(a, 3) == series_mul(a, series_mul(a, a))

    def test_diff_drops_constant(self):
        a = laurent(-1, [1, 7, 3])   # 1/(s-1) + 7 + 3(s-1)
        d = series_diff(a)
        assert d.coefficient(-2) == -1
        assert d.coefficient(0) == 3
        assert d.trunc_order == 0

    def test_one_over_s(self):
        s = one_over_s_series(4)
        # (s-1+1) * (1 - (s-1) + ...) == 1
        lin = laurent(0, [1, 1, 0, 0, 0])
        assert series_equal(series_mul(lin, s), one_series(3))


# ---------------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------------

def _series_strategy():
    coeff = st.integers(min_value=-9, max_value=9)
    return st.builds(
        laurent,
        st.integers(min_value=-3, max_value=3),
        st.lists(coeff, min_size=1, max_size=6),
    )


class TestProperties:
    @settings(max_examples=80, deadline=None)
    @given(_series_strategy(), _series_strategy())
    def test_mul_commutative(self, a, b):
        try:
            left = series_mul(a, b)
            right = series_mul(b, a)
        except TruncationUnderflowError:
            return
        assert series_equal(left, right)

    @settings(max_examples=80, deadline=None)
    @given(_series_strategy(), _series_strategy())
    def test_add_commutative(self, a, b):
        try:
            assert series_equal(series_add(a, b), series_add(b, a))
        except TruncationUnderflowError:
            return

    @settings(max_examples=60, deadline=None)
    @given(_series_strategy(), _series_strategy(), _series_strategy())
    def test_distributive_on_common_window(self, a, b, c):
        try:
            left = series_mul(a, series_add(b, c))
            right = series_add(series_mul(a, b), series_mul(a, c))
        except TruncationUnderflowError:
            return
        assert series_equal(left, right)

    @settings(max_examples=60, deadline=None)
    @given(_series_strategy())
    def test_inverse_round_trip_random(self, a):
        if a.is_zero():
            return
        prod = series_mul(a, series_inv(a))
        # inversion divides, so allow ambient-precision rounding
        assert series_equal(prod, one_series(max(prod.trunc_order, 0)), tol="1e-12")

    def test_diff_of_constant_keeps_empty_window_honest(self):
        # d/ds of 1 + O(s-1) is 0 + O(1): a zero series trusted only through
        # exponent -1, not the canonical zero trusted through 0
        d = series_diff(laurent(0, [1]))
        assert d.is_zero()
        assert d.trunc_order == -1
        # Leibniz regression: with the truncation carried, both sides agree
        a, b = laurent(0, [1]), laurent(0, [1, 1])
        left = series_diff(series_mul(a, b))
        right = series_add(series_mul(series_diff(a), b), series_mul(a, series_diff(b)))
        assert left.trunc_order == right.trunc_order == -1
        assert series_equal(left, right)

    @settings(max_examples=60, deadline=None)
    @given(_series_strategy(), _series_strategy())
    def test_leibniz_rule(self, a, b):
        try:
            left = series_diff(series_mul(a, b))
            right = series_add(series_mul(series_diff(a), b), series_mul(a, series_diff(b)))
        except TruncationUnderflowError:
            return
        assert series_equal(left, right)


# ---------------------------------------------------------------------------
# Stieltjes constants
# ---------------------------------------------------------------------------

class TestStieltjes:
    def test_gamma0_is_euler(self):
        with mp.workdps(50):
            assert approx_equal(stieltjes(0), mp.euler, "1e-48")

    def test_table_against_mpmath(self):
        with mp.workdps(60):
            for j in (1, 2, 5, 10, 25, 40):
                assert approx_equal(stieltjes(j), mp.stieltjes(j), "1e-45")

    def test_independent_backend_agrees(self):
        for j in range(0, 9):
            diff = abs(stieltjes(j, 30) - stieltjes_computed(j, 30))
            assert diff < mp.mpf("1e-28")

    def test_index_and_precision_guards(self):
        with pytest.raises(UnsupportedIndexError):
            stieltjes(41)
        with pytest.raises(UnsupportedIndexError):
            stieltjes(-1)
        with pytest.raises(PrecisionError):
            stieltjes(0, digits=51)

    def test_table_loader_roundtrip(self, tmp_path):
        path = tmp_path / "table.txt"
        path.write_text("# comment\n0\t0.5772156649015328606\n1\t-0.0728158454836767249\n")
        table = load_stieltjes_table(str(path))
        assert table.j_max == 1
        assert approx_equal(table.values[0], "0.5772156649015328606", "1e-18")


class TestZetaSeries:
    def test_pole_and_leading_coefficients(self):
        z = zeta_series(3)
        assert z.lowest_order == -1
        assert z.coefficient(-1) == 1
        with mp.workdps(50):
            assert approx_equal(z.coefficient(0), mp.euler, "1e-48")
            assert approx_equal(z.coefficient(1), -mp.stieltjes(1), "1e-45")
            assert approx_equal(z.coefficient(2), mp.stieltjes(2) / 2, "1e-45")

    def test_evaluate_matches_zeta(self):
        with mp.workdps(30):
            z = zeta_series(12)
            x = mp.mpf("0.01")
            assert abs(z.evaluate(x) - mp.zeta(1 + x)) < mp.mpf("1e-25")

    def test_trunc_guard(self):
        with pytest.raises(TruncationUnderflowError):
            zeta_series(-2)
