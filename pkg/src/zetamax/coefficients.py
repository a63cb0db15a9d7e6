"""Coefficient pipeline for the asymptotic expansion of the extrema second moment.

The target expansion, with L = log(T/2pi), is

    (T/2pi) * ( alpha_{-2} L^2 + alpha_{-1} L + sum_{n>=0} alpha_n / L^n )

The chain runs:

  1. c_{k,l}: Laurent coefficients about s = 1 of
     (zeta'/zeta)'(s) * (-zeta'/zeta(s))^{k-1} * zeta(s)^2 / s
     indexed so c_{k,l} multiplies (s-1)^(-k-3+l).  Extracted by direct
     truncated-series arithmetic (:mod:`zetamax.series`).
  2. beta_{k,n}: per-k coefficient of L^{-n}, in closed form in the c_{k,l}.
  3. alpha_n: summed over k, either via the double-sum closed form or as
     sum_k 2 beta_{k,n} (two independent evaluation paths, cross-checked in
     the tests).

The k-sums converge like 2^k/k!, so a modest K_max with an adaptive tail stop
is ample.  All arithmetic runs at a configurable precision (default 50
digits): the alpha_n suffer heavy cancellation between terms of factorial
size, and surviving that is the whole point of carrying high precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp

from .series import (
    DEFAULT_DIGITS,
    LaurentSeries,
    one_over_s_series,
    series_diff,
    series_inv,
    series_mul,
    series_neg,
    stieltjes,
    zeta_series,
)

DEFAULT_K_MAX = 80
DEFAULT_L_MAX = 25
DEFAULT_TAIL_TOL = mp.mpf("1e-18")
_CONSECUTIVE_SMALL = 3


class NonConvergenceError(Exception):
    """The adaptive k-sum tail criterion never triggered before K_max."""


@dataclass(frozen=True)
class CoefficientTable:
    """c_{k,l} for 1 <= k <= K_max, 0 <= l <= L_max, at fixed precision."""

    K_max: int
    L_max: int
    c: tuple  # c[k-1][l] as mpf
    digits: int

    def value(self, k: int, l: int):
        if not (1 <= k <= self.K_max):
            raise IndexError("k=%d outside table range 1..%d" % (k, self.K_max))
        if not (0 <= l <= self.L_max):
            raise IndexError("l=%d outside table range 0..%d" % (l, self.L_max))
        return self.c[k - 1][l]


@dataclass(frozen=True)
class AlphaSet:
    """alpha_n for -2 <= n <= N_max, with the truncation bookkeeping."""

    N_max: int
    alpha: dict
    k_truncation_used: int
    tail_bound: object  # mpf: largest discarded-term magnitude over all n
    digits: int
    tail_tol: object = field(default=DEFAULT_TAIL_TOL)

    def value(self, n: int):
        if n not in self.alpha:
            raise IndexError("alpha_%d not in set (-2..%d)" % (n, self.N_max))
        return self.alpha[n]


def build_c_table(
    K_max: int = DEFAULT_K_MAX,
    L_max: int = DEFAULT_L_MAX,
    digits: int = DEFAULT_DIGITS,
) -> CoefficientTable:
    """Extract c_{k,l} by truncated Laurent arithmetic.

    Each k-row reads the coefficient window of

        (zeta'/zeta)' * (-zeta'/zeta)^(k-1) * zeta^2 / s

    starting at its leading exponent -(k+3).  The running power of
    -zeta'/zeta is built incrementally over k.
    """
    if K_max < 1 or L_max < 2:
        raise ValueError("need K_max >= 1 and L_max >= 2")
    window = L_max + 3  # coefficients retained per factor; margin over L_max+1
    with mp.workdps(digits):
        zeta = zeta_series(window - 2, digits)          # lowest -1, window coeffs
        zeta_sq = series_mul(zeta, zeta)
        log_deriv = series_mul(series_diff(zeta), series_inv(zeta))  # zeta'/zeta
        neg_log_deriv = series_neg(log_deriv)
        d_log_deriv = series_diff(log_deriv)            # (zeta'/zeta)'
        inv_s = one_over_s_series(window - 1)
        base = series_mul(series_mul(d_log_deriv, zeta_sq), inv_s)

        rows = []
        power = None  # (-zeta'/zeta)^(k-1)
        for k in range(1, K_max + 1):
            # entering iteration k, power holds (-zeta'/zeta)^(k-1)
            product = base if power is None else series_mul(base, power)
            power = neg_log_deriv if power is None else series_mul(power, neg_log_deriv)
            lead = -(k + 3)
            if product.lowest_order != lead:
                raise RuntimeError(
                    "k=%d: leading exponent %d, expected %d"
                    % (k, product.lowest_order, lead)
                )
            if product.trunc_order < lead + L_max:
                raise RuntimeError("k=%d: window too short for L_max=%d" % (k, L_max))
            rows.append(tuple(product.coefficient(lead + l) for l in range(L_max + 1)))
        return CoefficientTable(K_max, L_max, tuple(rows), digits)


def beta(k: int, n: int, table: CoefficientTable):
    """Per-k coefficient beta_{k,n} of L^{-n} (n >= -1), in closed form.

    Four branches: n = -1, n = 0, 1 <= n <= k, and n >= k+1.
    """
    if k < 1 or k > table.K_max:
        raise IndexError("k=%d outside table range" % k)
    if n < -1:
        raise IndexError("beta is defined for n >= -1")
    if n + 2 > table.L_max:
        raise IndexError("n=%d needs c_{k,%d} beyond L_max=%d" % (n, n + 2, table.L_max))
    two_k = mp.mpf(2) ** k
    if n == -1:
        g0 = stieltjes(0, table.digits)
        return two_k / mp.factorial(k + 2) * (-2 - (k + 2) * (k - 3) * g0)
    if n == 0:
        c0 = table.value(k, 0)
        c1 = table.value(k, 1)
        c2 = table.value(k, 2)
        return two_k * ((k + 2) * (k + 1) * c2 - k * c0 + k * (k + 2) * c1) / mp.factorial(k + 2)
    if n <= k:
        head = two_k * table.value(k, n + 2) / mp.factorial(k - n)
        tail = mp.mpf(0)
        for j in range(0, n):
            tail += mp.binomial(k, j) * table.value(k, j + 2)
        return head + two_k * mp.factorial(n - 1) / mp.factorial(k - 1) * tail
    total = mp.mpf(0)
    for j in range(0, k + 1):
        total += mp.binomial(k, j) * table.value(k, j + 2)
    return two_k * mp.factorial(n - 1) / mp.factorial(k - 1) * total


def _adaptive_sum(terms, K_max: int, tail_tol) -> tuple:
    """Sum terms(k) for k = 1..K_max, stopping once the current term is below
    tail_tol times the accumulated absolute mass for three consecutive k.

    Returns (sum, k_used, tail_bound).
    """
    total = mp.mpf(0)
    mass = mp.mpf(0)
    small_run = 0
    last = mp.mpf(0)
    for k in range(1, K_max + 1):
        t = terms(k)
        total += t
        mass += abs(t)
        last = abs(t)
        if mass > 0 and abs(t) <= tail_tol * mass:
            small_run += 1
            if small_run >= _CONSECUTIVE_SMALL:
                return total, k, last
        else:
            small_run = 0
    raise NonConvergenceError(
        "k-sum tail criterion not met by K_max=%d (last |term| %s)" % (K_max, mp.nstr(last, 5))
    )


def alpha(n: int, table: CoefficientTable, tail_tol=DEFAULT_TAIL_TOL):
    """alpha_n via the closed forms (n <= 0) or the double sum (n >= 1)."""
    value, _, _ = _alpha_with_meta(n, table, tail_tol)
    return value


def _alpha_with_meta(n: int, table: CoefficientTable, tail_tol):
    with mp.workdps(table.digits):
        if n < -2:
            raise IndexError("alpha is defined for n >= -2")
        if n <= 0:
            return _alpha_closed_form(n, table.digits), 0, mp.mpf(0)
        if n + 2 > table.L_max:
            raise IndexError("n=%d needs c_{k,%d} beyond L_max=%d" % (n, n + 2, table.L_max))

        def first(k):
            if k < n:
                return mp.mpf(0)
            return mp.mpf(2) ** (k + 1) * table.value(k, n + 2) / mp.factorial(k - n)

        def second(k):
            inner = mp.mpf(0)
            for j in range(0, min(k, n - 1) + 1):
                inner += mp.binomial(k, j) * table.value(k, j + 2)
            return mp.mpf(2) ** (k + 1) / mp.factorial(k - 1) * inner

        s1, k1, t1 = _adaptive_sum(first, table.K_max, tail_tol)
        s2, k2, t2 = _adaptive_sum(second, table.K_max, tail_tol)
        return s1 + mp.factorial(n - 1) * s2, max(k1, k2), max(t1, mp.factorial(n - 1) * t2)


def _alpha_closed_form(n: int, digits: int):
    e2 = mp.e ** 2
    g0 = stieltjes(0, digits)
    g1 = stieltjes(1, digits)
    if n == -2:
        return (e2 - 5) / 2
    if n == -1:
        return 5 - e2 - 10 * g0 + 2 * e2 * g0
    if n == 0:
        return 12 * g1 - 4 * e2 * g1 - 5 + e2 + 10 * g0 - 2 * e2 * g0 - 4 * g0 ** 2
    raise IndexError("closed forms exist for n in {-2, -1, 0} only")


def alpha_via_beta(n: int, table: CoefficientTable, tail_tol=DEFAULT_TAIL_TOL):
    """Independent evaluation alpha_n = sum_k 2 beta_{k,n} (cross-check path).

    For n = -2 the per-k term is 2^{k+1}/(k+2)!, summing to e^2 - 5.
    """
    with mp.workdps(table.digits):
        if n == -2:
            value, _, _ = _adaptive_sum(
                lambda k: mp.mpf(2) ** (k + 1) / mp.factorial(k + 2), table.K_max, tail_tol
            )
            return value
        value, _, _ = _adaptive_sum(
            lambda k: 2 * beta(k, n, table), table.K_max, tail_tol
        )
        return value


def build_alpha_set(
    table: CoefficientTable,
    N_max: int = DEFAULT_L_MAX - 3,
    tail_tol=DEFAULT_TAIL_TOL,
) -> AlphaSet:
    """alpha_n for all -2 <= n <= N_max, with truncation metadata."""
    values = {}
    k_used = 0
    tail = mp.mpf(0)
    for n in range(-2, N_max + 1):
        v, k, t = _alpha_with_meta(n, table, tail_tol)
        values[n] = v
        k_used = max(k_used, k)
        tail = max(tail, t)
    return AlphaSet(N_max, values, k_used, tail, table.digits, tail_tol)


def asymptotic_value(T: float, alphas: AlphaSet, N: int) -> float:
    """Evaluate (T/2pi)(alpha_{-2} L^2 + alpha_{-1} L + sum_{n=0}^N alpha_n L^-n).

    N = -2 returns the leading term only; N = -1 adds the subleading term.
    """
    if N > alphas.N_max:
        raise IndexError("N=%d exceeds N_max=%d" % (N, alphas.N_max))
    if N < -2:
        raise IndexError("N must be >= -2")
    with mp.workdps(alphas.digits):
        T = mp.mpf(T)
        if T <= 2 * mp.pi:
            raise ValueError("need T > 2*pi so that L = log(T/2pi) > 0")
        L = mp.log(T / (2 * mp.pi))
        total = alphas.value(-2) * L ** 2
        if N >= -1:
            total += alphas.value(-1) * L
        for n in range(0, N + 1):
            total += alphas.value(n) / L ** n
        return float(T / (2 * mp.pi) * total)


def _eta_objective(x: float) -> float:
    import math

    return x * math.log(x) - x + 0.5


def _bisect(lo: float, hi: float, tol: float = 1e-13) -> float:
    flo = _eta_objective(lo)
    if flo == 0:
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = _eta_objective(mid)
        if fmid == 0:
            return mid
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def optimal_truncation_eta_roots() -> tuple:
    """Both positive roots of eta*log(eta) - eta = -1/2 (bracketed bisection)."""
    return _bisect(0.01, 1.0), _bisect(1.0, 3.0)


def optimal_truncation_eta() -> float:
    """The smaller positive root of eta*log(eta) - eta = -1/2 (about 0.186)."""
    return optimal_truncation_eta_roots()[0]


def format_alpha(n: int, value) -> str:
    """Render alpha_n the way the summary table prints it: two decimals up to
    n = 12, three significant figures in scientific notation beyond."""
    if n >= 13:
        return "%.2e" % float(value)
    return "%.2f" % float(value)
