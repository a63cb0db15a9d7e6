"""Truncated Laurent series arithmetic about s = 1, plus Stieltjes constants.

This is the algebra engine behind the coefficient pipeline.  A series is a
finite window of high-precision real coefficients

    a(s) = sum_i  coeffs[i] * (s - 1)**(lowest_order + i)

declared accurate through the exponent ``trunc_order`` (inclusive).  Every
operation propagates the truncation window explicitly: the product of series
with lowest orders a0, b0 and truncations p, q is only trustworthy through
exponent min(p + b0, q + a0), and the code enforces that rather than silently
returning garbage coefficients.

Coefficients are ``mpmath.mpf`` values; callers choose the working precision
by wrapping calls in ``mpmath.workdps`` (the coefficient pipeline defaults to
50 significant digits).

The zeta expansion about s = 1 is

    zeta(s) = 1/(s-1) + gamma_0 - gamma_1 (s-1) + ... + (-1)^j gamma_j / j! (s-1)^j + ...

where gamma_j are the Stieltjes constants.  Those are served from a bundled
50-digit table (``_data/stieltjes.txt``), with an independent Euler-Maclaurin
backend (:func:`stieltjes_computed`) retained for cross-validation.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath as mp

DEFAULT_DIGITS = 50
STIELTJES_J_MAX = 40
STIELTJES_TABLE_DIGITS = 50


class SeriesError(Exception):
    """Base class for series-arithmetic failures."""


class TruncationUnderflowError(SeriesError):
    """An operation would return an empty coefficient window."""


class NonInvertibleError(SeriesError):
    """Inversion of the zero series was requested."""


class UnsupportedIndexError(SeriesError):
    """A Stieltjes constant outside the supported index range was requested."""


class PrecisionError(SeriesError):
    """More digits were requested than the backing table provides."""


@dataclass(frozen=True)
class LaurentSeries:
    """Truncated Laurent series about s = 1.

    ``coeffs[i]`` multiplies (s-1)**(lowest_order + i); the series is accurate
    through exponent ``trunc_order`` inclusive, so
    ``lowest_order + len(coeffs) - 1 == trunc_order`` always holds.

    A zero series is ``(t, (0,), t)``: every coefficient through exponent t is
    known to be zero, nothing is known beyond.  Keeping t (instead of a single
    canonical zero) lets differentiation and multiplication shrink the trusted
    window of a zero result honestly.
    """

    lowest_order: int
    coeffs: tuple
    trunc_order: int

    def __post_init__(self):
        if not self.coeffs:
            raise SeriesError("coefficient window must be non-empty")
        if self.lowest_order + len(self.coeffs) - 1 != self.trunc_order:
            raise SeriesError(
                "inconsistent window: lowest_order=%d, %d coeffs, trunc_order=%d"
                % (self.lowest_order, len(self.coeffs), self.trunc_order)
            )
        if not self.is_zero() and self.coeffs[0] == 0:
            raise SeriesError("leading coefficient must be nonzero (or use the zero series)")

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def coefficient(self, exponent: int):
        """Coefficient of (s-1)**exponent; raises if outside the trusted window."""
        if exponent > self.trunc_order:
            raise TruncationUnderflowError(
                "exponent %d beyond truncation order %d" % (exponent, self.trunc_order)
            )
        i = exponent - self.lowest_order
        if i < 0:
            return mp.mpf(0)
        return self.coeffs[i]

    def evaluate(self, x):
        """Evaluate the series at s - 1 = x (x != 0 if there are pole terms)."""
        x = mp.mpf(x) if not isinstance(x, mp.mpc) else x
        total = mp.mpf(0)
        for i, c in enumerate(self.coeffs):
            total += c * x ** (self.lowest_order + i)
        return total


def zero_series(trunc: int = 0) -> LaurentSeries:
    """The zero series with all coefficients through ``trunc`` known zero."""
    return LaurentSeries(trunc, (mp.mpf(0),), trunc)


def laurent(lowest_order: int, coeffs: Sequence) -> LaurentSeries:
    """Build a series from a coefficient window, normalizing leading zeros.

    Stripping a leading zero raises ``lowest_order`` but keeps ``trunc_order``:
    the window shrinks, the trusted truncation does not change.  An all-zero
    window collapses to the zero series with the same truncation.
    """
    cs = [mp.mpf(c) if not isinstance(c, mp.mpf) else c for c in coeffs]
    trunc = lowest_order + len(cs) - 1
    while cs and cs[0] == 0:
        cs.pop(0)
        lowest_order += 1
    if not cs:
        return zero_series(trunc)
    return LaurentSeries(lowest_order, tuple(cs), trunc)


def one_series(trunc: int = 0) -> LaurentSeries:
    """The multiplicative unit, trusted through exponent ``trunc``."""
    if trunc < 0:
        raise TruncationUnderflowError("unit series needs trunc >= 0")
    return LaurentSeries(0, (mp.mpf(1),) + (mp.mpf(0),) * trunc, trunc)


def series_add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    lo = min(a.lowest_order, b.lowest_order)
    hi = min(a.trunc_order, b.trunc_order)
    if hi < lo:
        raise TruncationUnderflowError("sum window is empty")
    cs = []
    for e in range(lo, hi + 1):
        ca = a.coeffs[e - a.lowest_order] if a.lowest_order <= e <= a.trunc_order else mp.mpf(0)
        cb = b.coeffs[e - b.lowest_order] if b.lowest_order <= e <= b.trunc_order else mp.mpf(0)
        cs.append(ca + cb)
    return laurent(lo, cs)


def series_neg(a: LaurentSeries) -> LaurentSeries:
    if a.is_zero():
        return a
    return LaurentSeries(a.lowest_order, tuple(-c for c in a.coeffs), a.trunc_order)


def series_scale(a: LaurentSeries, factor) -> LaurentSeries:
    factor = mp.mpf(factor)
    if a.is_zero() or factor == 0:
        return zero_series(a.trunc_order)
    return LaurentSeries(a.lowest_order, tuple(factor * c for c in a.coeffs), a.trunc_order)


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Cauchy product with truncation propagated as min(p + b0, q + a0)."""
    lo = a.lowest_order + b.lowest_order
    trunc = min(a.trunc_order + b.lowest_order, b.trunc_order + a.lowest_order)
    if trunc < lo:
        raise TruncationUnderflowError("product window is empty")
    n = trunc - lo + 1
    cs = [mp.mpf(0)] * n
    for i, ca in enumerate(a.coeffs):
        if i >= n:
            break
        for j, cb in enumerate(b.coeffs):
            if i + j >= n:
                break
            cs[i + j] += ca * cb
    return laurent(lo, cs)


def series_inv(a: LaurentSeries) -> LaurentSeries:
    """Multiplicative inverse; series_mul(a, series_inv(a)) is the unit series
    through the propagated truncation."""
    if a.is_zero():
        raise NonInvertibleError("zero series has no inverse")
    n = len(a.coeffs)
    lead = a.coeffs[0]
    inv = [mp.mpf(0)] * n
    inv[0] = 1 / lead
    for m in range(1, n):
        acc = mp.mpf(0)
        for i in range(1, m + 1):
            acc += a.coeffs[i] * inv[m - i]
        inv[m] = -acc / lead
    return laurent(-a.lowest_order, inv)


def series_pow(a: LaurentSeries, m: int) -> LaurentSeries:
    """Non-negative integer power; m = 0 returns the unit series with the
    same window length as ``a``."""
    if m < 0:
        raise SeriesError("negative powers: compose series_inv with series_pow")
    if m == 0:
        return one_series(a.trunc_order - a.lowest_order)
    result = a
    for _ in range(m - 1):
        result = series_mul(result, a)
    return result


def series_diff(a: LaurentSeries) -> LaurentSeries:
    """Term-by-term derivative; the truncation order drops by one."""
    cs = []
    for i, c in enumerate(a.coeffs):
        e = a.lowest_order + i
        cs.append(c * e)
    # exponent e maps to e - 1; the constant term contributes a zero that
    # laurent() strips again
    return laurent(a.lowest_order - 1, cs)


def one_over_s_series(trunc: int) -> LaurentSeries:
    """1/s = 1 - (s-1) + (s-1)^2 - ... through exponent ``trunc``."""
    if trunc < 0:
        raise TruncationUnderflowError("1/s expansion needs trunc >= 0")
    return LaurentSeries(0, tuple(mp.mpf(-1) ** j for j in range(trunc + 1)), trunc)


# ---------------------------------------------------------------------------
# Stieltjes constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StieltjesTable:
    """Stieltjes constants gamma_0 ... gamma_J at fixed precision."""

    values: tuple
    precision_digits: int
    source: str  # "bundled_table" or "computed"

    @property
    def j_max(self) -> int:
        return len(self.values) - 1


_BUNDLED: StieltjesTable | None = None


def load_stieltjes_table(path: str | None = None) -> StieltjesTable:
    """Load the constants from a table file (``j<TAB>decimal-string`` lines).

    With ``path=None`` the bundled 50-digit table is used.
    """
    if path is None:
        text = (
            importlib.resources.files("zetamax")
            .joinpath("_data/stieltjes.txt")
            .read_text(encoding="ascii")
        )
    else:
        with open(path, "r", encoding="ascii") as fh:
            text = fh.read()
    values = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        j_str, val_str = line.split("\t")
        values[int(j_str)] = val_str
    with mp.workdps(STIELTJES_TABLE_DIGITS + 10):
        vals = tuple(mp.mpf(values[j]) for j in range(len(values)))
    return StieltjesTable(vals, STIELTJES_TABLE_DIGITS, "bundled_table")


def _bundled() -> StieltjesTable:
    global _BUNDLED
    if _BUNDLED is None:
        _BUNDLED = load_stieltjes_table()
    return _BUNDLED


def stieltjes(j: int, digits: int = DEFAULT_DIGITS):
    """gamma_j to ``digits`` significant digits, from the bundled table.

    Raises :class:`UnsupportedIndexError` for j beyond the table and
    :class:`PrecisionError` when more digits are requested than the table
    carries.
    """
    if j < 0:
        raise UnsupportedIndexError("Stieltjes index must be non-negative")
    table = _bundled()
    if j > table.j_max:
        raise UnsupportedIndexError(
            "gamma_%d not available (table stops at j=%d)" % (j, table.j_max)
        )
    if digits > table.precision_digits:
        raise PrecisionError(
            "%d digits requested but the table carries %d" % (digits, table.precision_digits)
        )
    return table.values[j]


def _log_power_derivative_polys(j: int, max_order: int) -> list:
    """Polynomials P_r with d^r/dx^r [(log x)^j / x] = x^(-1-r) P_r(log x).

    Recurrence: P_0(u) = u^j and P_{r+1} = P_r' - (r+1) P_r.  Coefficients are
    exact integers.
    """
    polys = [[0] * j + [1]]  # ascending coefficients of u^j
    for r in range(max_order):
        p = polys[-1]
        q = [0] * len(p)
        for i in range(1, len(p)):
            q[i - 1] += i * p[i]
        for i in range(len(p)):
            q[i] -= (r + 1) * p[i]
        polys.append(q)
    return polys


def stieltjes_computed(j: int, digits: int = DEFAULT_DIGITS):
    """Independent Euler-Maclaurin evaluation of gamma_j.

    Uses

        gamma_j = sum_{k<=m} f(k) - (log m)^{j+1}/(j+1) - f(m)/2
                  - sum_r B_{2r}/(2r)! f^{(2r-1)}(m) + tail

    with f(x) = (log x)^j / x and exact closed-form derivatives.  Much slower
    than the bundled table; intended for cross-validation.
    """
    if j < 0:
        raise UnsupportedIndexError("Stieltjes index must be non-negative")
    guard = 25 + 2 * j
    m = max(60, 4 * digits)
    max_r = 3 * digits
    with mp.workdps(digits + guard):
        logs = [mp.log(k) for k in range(2, m + 1)]
        f_sum = mp.mpf(0) if j > 0 else mp.mpf(1)  # k = 1 term
        for k, lg in zip(range(2, m + 1), logs):
            f_sum += lg ** j / k
        lm = mp.log(m)
        result = f_sum - lm ** (j + 1) / (j + 1) - lm ** j / (2 * m)
        polys = _log_power_derivative_polys(j, 2 * max_r)
        target = mp.mpf(10) ** (-(digits + 10))
        prev_term = mp.inf
        for r in range(1, max_r + 1):
            p = polys[2 * r - 1]
            deriv = sum(c * lm ** i for i, c in enumerate(p)) / mp.mpf(m) ** (2 * r)
            term = mp.bernoulli(2 * r) / mp.factorial(2 * r) * deriv
            if abs(term) > abs(prev_term):
                break  # asymptotic series turned; stop at the smallest term
            result -= term
            prev_term = term
            if abs(term) < target:
                break
    with mp.workdps(digits):
        return +result


def zeta_series(trunc: int, digits: int = DEFAULT_DIGITS) -> LaurentSeries:
    """Laurent expansion of zeta about s = 1 through exponent ``trunc``."""
    if trunc < -1:
        raise TruncationUnderflowError("zeta expansion starts at the 1/(s-1) pole")
    with mp.workdps(digits):
        cs = [mp.mpf(1)]
        for jj in range(0, trunc + 1):
            cs.append(mp.mpf(-1) ** jj * stieltjes(jj, digits) / mp.factorial(jj))
    return LaurentSeries(-1, tuple(cs), trunc)
