"""Brute-force arithmetic-function machinery used as an independent oracle.

Sieved tables of the von Mangoldt function Lambda(n), the divisor function
d(n), the iterated convolutions Lambda_k = Lambda * ... * Lambda (k-1
convolutions, with Lambda_0 the convolution identity supported at n = 1), and

    a_k(n) = ((Lambda * log) convolved with Lambda_{k-1})(n),

so a_1(n) = Lambda(n) log n.  These feed three independent cross-checks:

  * the Mobius and Selberg identities (direct divisor-sum evaluation);
  * the partial sums A_k(x) = sum_{n <= x} (a_k conv d)(n), compared against
    the residue main term x sum_j c_{k,j} (log x)^{k+2-j} / (k+2-j)! built
    from the Laurent coefficient table;
  * the Dirichlet-series expansion of Z_1'/Z_1(s) in powers of 1/f(s),
    compared against direct evaluation from partial sums of zeta, zeta', zeta''.

Everything is plain float64: the identities are exact in exact arithmetic and
the relative rounding over at most d(n) terms stays many orders below the
1e-9 check tolerance at the table sizes used here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .coefficients import CoefficientTable
from .hardy import f_of_s, f_prime

DEFAULT_X_MAX = 100_000
DEFAULT_K_MAX = 4
MEMORY_BUDGET_BYTES = 4 * 1024 ** 3
IDENTITY_RTOL = 1e-9


class CapacityError(MemoryError):
    """Requested tables exceed the memory budget."""


class RangeError(IndexError):
    """Query beyond the sieved range."""


class AccuracyError(RuntimeError):
    """Truncation too small for the target accuracy."""


class ExpansionInvalidError(ValueError):
    """The geometric expansion in 1/f(s) does not converge at this s."""


@dataclass
class ArithmeticTables:
    """Sieved tables on 1..x_max (index 0 unused)."""

    x_max: int
    lam: np.ndarray                # Lambda(n)
    divisor: np.ndarray            # d(n)
    mobius: np.ndarray             # mu(n)
    lambda_k: dict = field(default_factory=dict)   # k -> Lambda_k(n)
    a_k: dict = field(default_factory=dict)        # k -> a_k(n)
    _akd_prefix: dict = field(default_factory=dict, repr=False)

    @property
    def k_max(self) -> int:
        return max(self.a_k)


def dirichlet_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a * b)(n) = sum_{d | n} a(d) b(n/d) on 1..x_max, O(x log x)."""
    x = len(a) - 1
    out = np.zeros_like(a, dtype=np.float64)
    for d in np.nonzero(a)[0]:
        if d == 0:
            continue
        m = x // d
        out[d::d] += a[d] * b[1 : m + 1]
    return out


def build_tables(x_max: int = DEFAULT_X_MAX, k_max: int = DEFAULT_K_MAX) -> ArithmeticTables:
    """Sieve Lambda, d, mu and build Lambda_k, a_k up to k_max."""
    if x_max < 2 or k_max < 1:
        raise ValueError("need x_max >= 2 and k_max >= 1")
    est = (k_max * 2 + 4) * (x_max + 1) * 8
    if est > MEMORY_BUDGET_BYTES:
        raise CapacityError(
            "tables need about %d bytes, budget is %d" % (est, MEMORY_BUDGET_BYTES)
        )
    n = x_max + 1
    sieve = np.ones(n, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(x_max)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    primes = np.nonzero(sieve)[0]

    lam = np.zeros(n)
    mobius = np.ones(n, dtype=np.int64)
    mobius[0] = 0
    for p in primes:
        logp = math.log(p)
        q = p
        while q <= x_max:
            lam[q] = logp
            q *= p
        mobius[p::p] *= -1
        if p * p <= x_max:
            mobius[p * p :: p * p] = 0

    divisor = np.zeros(n, dtype=np.int64)
    for d in range(1, n):
        divisor[d::d] += 1

    tables = ArithmeticTables(x_max, lam, divisor, mobius)
    identity = np.zeros(n)
    identity[1] = 1.0
    tables.lambda_k[0] = identity
    tables.lambda_k[1] = lam
    for k in range(2, k_max + 1):
        tables.lambda_k[k] = dirichlet_convolve(lam, tables.lambda_k[k - 1])

    logs = np.zeros(n)
    logs[1:] = np.log(np.arange(1, n))
    lam_log = lam * logs
    tables.a_k[1] = lam_log
    for k in range(2, k_max + 1):
        tables.a_k[k] = dirichlet_convolve(lam_log, tables.lambda_k[k - 1])
    return tables


# ---------------------------------------------------------------------------
# identity checks
# ---------------------------------------------------------------------------

def _divisors(n: int):
    small = [d for d in range(1, int(math.isqrt(n)) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def mobius_identity_check(n: int, tables: ArithmeticTables) -> bool:
    """sum_{d | n} mu(d) log(n/d) == Lambda(n), to 1e-9 * max(1, log n)."""
    if not 2 <= n <= tables.x_max:
        raise RangeError("n=%d outside sieved range" % n)
    total = sum(tables.mobius[d] * math.log(n / d) for d in _divisors(n))
    return abs(total - tables.lam[n]) < IDENTITY_RTOL * max(1.0, math.log(n))


def selberg_identity_check(n: int, tables: ArithmeticTables) -> bool:
    """sum_{d | n} mu(d) log^2(n/d) == Lambda(n) log n + Lambda_2(n)."""
    if not 2 <= n <= tables.x_max:
        raise RangeError("n=%d outside sieved range" % n)
    total = sum(tables.mobius[d] * math.log(n / d) ** 2 for d in _divisors(n))
    rhs = tables.lam[n] * math.log(n) + tables.lambda_k[2][n]
    return abs(total - rhs) < IDENTITY_RTOL * max(1.0, math.log(n) ** 2)


def mobius_identity_max_error(tables: ArithmeticTables) -> float:
    """Max |(mu * log)(n) - Lambda(n)| / max(1, log n) over the whole table."""
    logs = np.zeros(tables.x_max + 1)
    logs[1:] = np.log(np.arange(1, tables.x_max + 1))
    conv = dirichlet_convolve(tables.mobius.astype(np.float64), logs)
    scale = np.maximum(1.0, logs[2:])
    return float(np.max(np.abs(conv[2:] - tables.lam[2:]) / scale))


def selberg_identity_max_error(tables: ArithmeticTables) -> float:
    """Selberg-identity residual, normalized like the pointwise check."""
    logs = np.zeros(tables.x_max + 1)
    logs[1:] = np.log(np.arange(1, tables.x_max + 1))
    conv = dirichlet_convolve(tables.mobius.astype(np.float64), logs ** 2)
    rhs = tables.lam * logs + tables.lambda_k[2]
    scale = np.maximum(1.0, logs[2:] ** 2)
    return float(np.max(np.abs(conv[2:] - rhs[2:]) / scale))


# ---------------------------------------------------------------------------
# A_k partial sums: brute force vs residue main term
# ---------------------------------------------------------------------------

def A_k_bruteforce(k: int, x: float, tables: ArithmeticTables) -> float:
    """sum_{n <= x} (a_k conv d)(n) by direct summation."""
    if x > tables.x_max:
        raise RangeError("x=%g beyond sieved x_max=%d" % (x, tables.x_max))
    if k not in tables.a_k:
        raise RangeError("tables not built through k=%d" % k)
    if k not in tables._akd_prefix:
        akd = dirichlet_convolve(tables.a_k[k], tables.divisor.astype(np.float64))
        tables._akd_prefix[k] = np.cumsum(akd)
    if x < 1:
        return 0.0
    return float(tables._akd_prefix[k][int(x)])


def A_k_residue(k: int, x: float, table: CoefficientTable) -> float:
    """Residue main term x sum_{j=0}^{k+2} c_{k,j} (log x)^{k+2-j} / (k+2-j)!."""
    if x <= 1:
        raise ValueError("need x > 1")
    lx = math.log(x)
    total = 0.0
    for j in range(0, k + 3):
        total += float(table.value(k, j)) * lx ** (k + 2 - j) / math.factorial(k + 2 - j)
    return x * total


RESIDUE_CAL_SAFETY = 4.0


def calibrate_residue_constant(k: int, tables: ArithmeticTables,
                               ctable: CoefficientTable,
                               x_cal: float = 1000.0,
                               safety: float = RESIDUE_CAL_SAFETY) -> float:
    """Calibrate C with |A_k(x) - main term| <= C x^0.6 expected for x >= x_cal.

    The true error is O(x^(1/2+eps)); normalised by x^0.6 it oscillates under
    an envelope ~ (log x)^(k-1) / x^0.1 which for k >= 3 keeps growing well
    past x = 1e5.  A single-point reading at x_cal can therefore sit in a
    trough, so C is the maximum of the normalised error over a geometric grid
    up to x_cal, times a safety factor sized to cover the envelope growth
    (a factor 1.75 for k = 3 between 1e3 and 1e5) plus oscillation.
    """
    grid = np.geomspace(max(x_cal / 8.0, 16.0), x_cal, 24)
    worst = 0.0
    for x in grid:
        diff = abs(A_k_bruteforce(k, x, tables) - A_k_residue(k, x, ctable))
        worst = max(worst, diff / x ** 0.6)
    return safety * worst


# ---------------------------------------------------------------------------
# Z_1'/Z_1 Dirichlet expansion cross-check
# ---------------------------------------------------------------------------

class ValueWithTail(NamedTuple):
    value: complex
    tail: float


def _log_power_tail(r: int, sigma: float, M: int) -> float:
    """Upper bound for sum_{n > M} (log n)^r / n^sigma via the incomplete-gamma
    closed form of the comparison integral (valid for sigma > 1)."""
    import mpmath as mp

    a = sigma - 1.0
    # integral_M^inf (log x)^r x^-sigma dx = Gamma(r+1, a log M) / a^(r+1)
    val = mp.gammainc(r + 1, a * math.log(M)) / mp.mpf(a) ** (r + 1)
    # crude unit-step slack for sum-vs-integral
    return float(val) + math.log(M) ** r / M ** sigma


def z1_logderiv_direct(s: complex, truncation: int = 4000,
                       target_accuracy: float | None = None) -> ValueWithTail:
    """Z_1'/Z_1(s) from partial Dirichlet sums of zeta, zeta', zeta''.

    Z_1 = zeta' + f zeta with f = -(1/2) chi'/chi, so

        Z_1'/Z_1 = (zeta'' + f zeta') / (zeta' + f zeta) + f' / (zeta'/zeta + f).

    Requires Re(s) >= 1.5 and Im(s) >= 100.  Returns the value together with a
    propagated truncation-tail estimate; if ``target_accuracy`` is given and
    the tail exceeds it, raises :class:`AccuracyError`.
    """
    s = complex(s)
    sigma, t = s.real, s.imag
    if sigma < 1.5 or t < 100:
        raise ValueError("need Re(s) >= 1.5 and Im(s) >= 100")
    n = np.arange(1, truncation + 1)
    npow = np.exp(-s * np.log(n))
    logn = np.log(n)
    zeta = np.sum(npow)
    zeta1 = -np.sum(logn * npow)
    zeta2 = np.sum(logn ** 2 * npow)

    f = complex(f_of_s(s))
    fp = f_prime(s)
    num = zeta2 + f * zeta1
    den = zeta1 + f * zeta
    value = num / den + fp / (zeta1 / zeta + f)

    # tail propagation: partial-sum tails of zeta^(r) bounded by the
    # comparison integral of (log x)^r x^-sigma
    t0 = _log_power_tail(0, sigma, truncation)
    t1 = _log_power_tail(1, sigma, truncation)
    t2 = _log_power_tail(2, sigma, truncation)
    d_num = t2 + abs(f) * t1
    d_den = t1 + abs(f) * t0
    tail = (d_num + abs(num / den) * d_den) / abs(den)
    d_ratio = (t1 + abs(zeta1 / zeta) * t0) / abs(zeta)
    tail += abs(fp) * d_ratio / abs(zeta1 / zeta + f) ** 2
    if target_accuracy is not None and tail > target_accuracy:
        raise AccuracyError(
            "tail estimate %.3g exceeds target %.3g; raise the truncation"
            % (tail, target_accuracy)
        )
    return ValueWithTail(complex(value), float(tail))


def dirichlet_expansion_partial(s: complex, k_max: int, n_max: int,
                                tables: ArithmeticTables) -> ValueWithTail:
    """Partial sum of the 1/f(s)-expansion of Z_1'/Z_1:

        sum_{n <= n_max} a(n, s) / n^s,
        a(n, s) = -Lambda(n) + sum_{k=1}^{k_max} a_k(n) / f(s)^k.

    The tail estimate combines the geometric k-tail (ratio |zeta'/zeta(sigma)|
    / |f(s)|, whose divergence raises :class:`ExpansionInvalidError`) with an
    empirical n-tail read off the sieved coefficients on (n_max, 2 n_max].
    """
    s = complex(s)
    sigma, t = s.real, s.imag
    if sigma < 1.5 or t < 100:
        raise ValueError("need Re(s) >= 1.5 and Im(s) >= 100")
    if k_max > 0 and k_max > tables.k_max:
        raise RangeError("tables not built through k=%d" % k_max)
    if n_max > tables.x_max:
        raise RangeError("n_max beyond sieved range")
    f = complex(f_of_s(s))

    # absolute-value Dirichlet sums at the real point sigma control the tails
    import mpmath as mp

    E = float(-mp.zeta(sigma, derivative=1) / mp.zeta(sigma))  # sum Lambda/n^sigma
    D = float(mp.diff(lambda z: mp.zeta(z, derivative=1) / mp.zeta(z), sigma))
    # D = sum Lambda(n) log n / n^sigma
    ratio = E / abs(f)
    if ratio >= 1:
        raise ExpansionInvalidError(
            "|zeta'/zeta(sigma)| / |f(s)| = %.3f >= 1: geometric expansion diverges" % ratio
        )

    n = np.arange(1, n_max + 1)
    npow = np.exp(-s * np.log(n))
    a_n = -tables.lam[1 : n_max + 1].astype(np.complex128)
    for k in range(1, k_max + 1):
        a_n += tables.a_k[k][1 : n_max + 1] / f ** k
    value = np.sum(a_n * npow)

    # k-tail: |sum_n a_k(n)/n^s| <= D(sigma) E(sigma)^(k-1), summed for k > k_max
    k_tail = D * ratio ** k_max / abs(f) / (1.0 - ratio)
    # n-tail: geometric extrapolation of the computed terms on (n_max, 2 n_max]
    hi = min(2 * n_max, tables.x_max)
    m = np.arange(n_max + 1, hi + 1)
    abs_a = tables.lam[n_max + 1 : hi + 1].copy()
    for k in range(1, k_max + 1):
        abs_a += np.abs(tables.a_k[k][n_max + 1 : hi + 1]) / abs(f) ** k
    block = float(np.sum(abs_a / m ** sigma))
    r = 2.0 ** (1.0 - sigma)
    n_tail = block / (1.0 - r)
    return ValueWithTail(complex(value), float(k_tail + n_tail))


def telescoping_residual(s: complex, k_max: int, n_max: int,
                         tables: ArithmeticTables, f: complex | None = None) -> tuple:
    """Check the telescoping of the Lambda_k tower at real or complex s.

    Exactly, (f^{-1} Lambda_2 - Lambda) * sum_{k=0}^{K} f^{-k} Lambda_k
    = f^{-(K+1)} Lambda_{K+2} - Lambda.  Returns the Dirichlet-sum values
    (lhs, rhs) over n <= n_max; they agree up to rounding, with the
    remainder term evaluated explicitly on the right.

    The identity is formal in f, so any nonzero f works; by default f is
    evaluated at height 200 above Re(s) (chi'/chi has poles on the real axis).
    """
    if k_max + 2 not in tables.lambda_k:
        raise RangeError("tables not built through Lambda_%d" % (k_max + 2))
    if f is None:
        point = complex(s) if abs(complex(s).imag) >= 1 else complex(complex(s).real, 200.0)
        f = complex(f_of_s(point))
    f = complex(f)
    x = n_max
    first = tables.lambda_k[2][: x + 1] / f - tables.lambda_k[1][: x + 1]
    tower = np.zeros(x + 1, dtype=np.complex128)
    for k in range(0, k_max + 1):
        tower += tables.lambda_k[k][: x + 1] / f ** k
    lhs_coeffs = dirichlet_convolve_complex(first, tower)
    rhs_coeffs = (
        tables.lambda_k[k_max + 2][: x + 1] / f ** (k_max + 1)
        - tables.lambda_k[1][: x + 1]
    )
    n = np.arange(1, x + 1)
    npow = np.exp(-complex(s) * np.log(n))
    lhs = complex(np.sum(lhs_coeffs[1:] * npow))
    rhs = complex(np.sum(rhs_coeffs[1:] * npow))
    return lhs, rhs


def dirichlet_convolve_complex(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    x = len(a) - 1
    out = np.zeros(x + 1, dtype=np.complex128)
    for d in range(1, x + 1):
        if a[d] != 0:
            m = x // d
            out[d::d] += a[d] * b[1 : m + 1]
    return out
