"""Cumulative extremum sums, asymptotic error tables, and moment cross-checks.

Ties the per-gap extremum records to the coefficient pipeline: builds
compensated cumulative sums of Z(t*)^2, compares them against the truncated
asymptotic expansion for a list of truncation orders N, and emits the
comparison as CSV.  Two analytic cross-checks validate the Z evaluator and
the chi-factor plumbing end to end:

  * the plain second moment  int_1^T Z(t)^2 dt ~ T log(T/2pi) + (2 gamma0 - 1) T;
  * the twisted second moment with weight -(1/2pi) Re chi'/chi(1/2 + it).

Both integrals use gap-aligned Gauss-Legendre panels (Z^2 vanishes
quadratically at each zero, so panel endpoints at the zeros remove the only
kinks) with per-panel refinement and a deterministic pairwise reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import bernoulli

from .coefficients import AlphaSet, asymptotic_value
from .hardy import ExtremumRecord, chi_logderiv, find_zeros, z_eval, T_MIN, TWO_PI
from .series import stieltjes

DEFAULT_QUAD_POINTS = 16
QUAD_REL_TOL = 1e-8
_MAX_SPLIT_DEPTH = 24
HEAD_SPLIT = 10.0       # below this the Riemann-Siegel path is unavailable
MOMENT_CAL_SAFETY = 3.0

_GAMMA0 = float(stieltjes(0))


class OrderingError(ValueError):
    """Extremum records were not in ascending order."""


class QuadratureError(RuntimeError):
    """A quadrature panel failed to converge under refinement."""


# ---------------------------------------------------------------------------
# Euler-Maclaurin zeta on the critical line (for t below the Riemann-Siegel
# domain, and as an independent oracle for z_eval in the tests)
# ---------------------------------------------------------------------------

_EM_TERMS = 25
_EM_CORRECTIONS = 12
_EM_BERNOULLI = bernoulli(2 * _EM_CORRECTIONS)


def zeta_critical(t):
    """zeta(1/2 + it) by direct Euler-Maclaurin summation (scalar or array).

    Accurate to ~1e-12 for 0 <= t <= 200.  The main sum has O(t) terms, so
    this is intended for low heights where the Riemann-Siegel evaluator does
    not apply, and as a slow independent oracle for it.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    s = 0.5 + 1j * t_arr
    # the correction tail converges like (|s| / M)^(2R): keep M above |t|
    M = max(_EM_TERMS, int(np.max(np.abs(t_arr))) + 10) if t_arr.size else _EM_TERMS
    n = np.arange(1, M, dtype=np.float64)
    out = np.exp(-s[:, None] * np.log(n)[None, :]).sum(axis=1)
    logM = math.log(M)
    out += np.exp((1.0 - s) * logM) / (s - 1.0)
    out += 0.5 * np.exp(-s * logM)
    poch = np.ones_like(s)     # s (s+1) ... (s + 2r - 2), built incrementally
    for r in range(1, _EM_CORRECTIONS + 1):
        poch = poch * (s + (2 * r - 2)) if r > 1 else s.copy()
        coeff = _EM_BERNOULLI[2 * r] / math.factorial(2 * r)
        out += coeff * poch * np.exp(-(s + (2 * r - 1)) * logM)
        poch = poch * (s + (2 * r - 1))
    if np.isscalar(t) or np.asarray(t).shape == ():
        return complex(out[0])
    return out


# ---------------------------------------------------------------------------
# cumulative sums and error tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CumulativeSeries:
    """Compensated prefix sums of Z(t*)^2 over ascending extremum records."""

    records: tuple
    prefix: np.ndarray
    t_values: np.ndarray

    def __len__(self):
        return len(self.records)

    @property
    def total(self) -> float:
        return float(self.prefix[-1]) if len(self.prefix) else 0.0


@dataclass(frozen=True)
class ErrorTable:
    """Signed errors asymptotic(N) - true_sum at a fixed reference height.

    Sign convention: error = asymptotic_value(T_ref, N) - true_sum, applied
    uniformly to every row.
    """

    T_ref: float
    true_sum: float
    rows: tuple   # of (N, error)


def compensated_prefix(values: np.ndarray) -> np.ndarray:
    """Kahan-compensated running sums, one rounding error per addition."""
    out = np.empty(len(values), dtype=np.float64)
    total = 0.0
    carry = 0.0
    for i, v in enumerate(values):
        y = float(v) - carry
        t = total + y
        carry = (t - total) - y
        total = t
        out[i] = total
    return out


def cumulative(records) -> CumulativeSeries:
    """Build the cumulative series of extremum values.

    Records must be ascending in t_star and free of flagged gaps; the prefix
    sums use compensated accumulation so the final total is independent of
    how the records were produced (worker count, batching).
    """
    records = tuple(records)
    t_values = np.array([r.t_star for r in records], dtype=np.float64)
    if np.any(np.diff(t_values) <= 0):
        raise OrderingError("extremum records must be strictly ascending in t_star")
    if any(r.flagged for r in records):
        raise OrderingError("flagged records present; resolve them before summing")
    z2 = np.array([r.z2 for r in records], dtype=np.float64)
    return CumulativeSeries(records, compensated_prefix(z2), t_values)


def error_table(series: CumulativeSeries, alphas: AlphaSet, N_list) -> ErrorTable:
    """Errors of the truncated expansion against the true cumulative sum.

    The reference height is the t_star of the last record (the location of
    the final local maximum, not the final zero ordinate).
    """
    if len(series) == 0:
        raise OrderingError("empty series has no reference height")
    T_ref = float(series.t_values[-1])
    true_sum = series.total
    rows = []
    for N in sorted(N_list):
        asym = float(asymptotic_value(T_ref, alphas, N))
        rows.append((int(N), asym - true_sum))
    return ErrorTable(T_ref, true_sum, tuple(rows))


# ---------------------------------------------------------------------------
# gap-aligned quadrature
# ---------------------------------------------------------------------------

def _pairwise_sum(values) -> float:
    """Deterministic pairwise-tree reduction (fixed shape for fixed length)."""
    vals = list(values)
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def _panel_edges(T: float) -> np.ndarray:
    """[1, HEAD_SPLIT, zeros in (HEAD_SPLIT, T), T]: panels meet at zeros."""
    if T <= HEAD_SPLIT + 5.0:
        raise ValueError("need T comfortably above %g" % HEAD_SPLIT)
    zeros = find_zeros(14.0, T)
    interior = zeros.ordinates[zeros.ordinates < T - 1e-9]
    return np.concatenate(([1.0, HEAD_SPLIT], interior, [T]))


def _gauss_eval(fvec, a, b, nodes, weights):
    """Integrals of fvec over each [a_i, b_i] with one batched evaluation."""
    h = (b - a) / 2.0
    mid = (a + b) / 2.0
    pts = mid[:, None] + h[:, None] * nodes[None, :]
    vals = fvec(pts.ravel()).reshape(pts.shape)
    return h * (vals @ weights)


def _refine_panel(fvec, a, b, rule_lo, rule_hi, rel_tol, depth=0) -> float:
    if depth > _MAX_SPLIT_DEPTH:
        raise QuadratureError("panel (%.6f, %.6f) failed to converge" % (a, b))
    one = np.array([a]), np.array([b])
    lo = float(_gauss_eval(fvec, one[0], one[1], *rule_lo)[0])
    hi = float(_gauss_eval(fvec, one[0], one[1], *rule_hi)[0])
    if abs(hi - lo) <= rel_tol * abs(hi) + 1e-12:
        return hi
    m = 0.5 * (a + b)
    return (_refine_panel(fvec, a, m, rule_lo, rule_hi, rel_tol, depth + 1)
            + _refine_panel(fvec, m, b, rule_lo, rule_hi, rel_tol, depth + 1))


def integrate_gap_aligned(fvec, T: float, quad_points: int = DEFAULT_QUAD_POINTS,
                          rel_tol: float = QUAD_REL_TOL) -> float:
    """Integrate fvec over [1, T] on panels aligned to the zeros of Z.

    Each panel is estimated with quad_points and 2*quad_points Gauss-Legendre
    nodes in a single batched evaluation; panels whose two estimates disagree
    beyond rel_tol are bisected recursively.  The final reduction is a
    pairwise tree in fixed panel order, so the result is reproducible.
    """
    edges = _panel_edges(T)
    a, b = edges[:-1], edges[1:]
    rule_lo = leggauss(quad_points)
    rule_hi = leggauss(2 * quad_points)
    I_lo = _gauss_eval(fvec, a, b, *rule_lo)
    I_hi = _gauss_eval(fvec, a, b, *rule_hi)
    bad = np.abs(I_hi - I_lo) > rel_tol * np.abs(I_hi) + 1e-12
    parts = I_hi.tolist()
    for i in np.nonzero(bad)[0]:
        parts[i] = _refine_panel(fvec, float(a[i]), float(b[i]),
                                 rule_lo, rule_hi, rel_tol)
    return _pairwise_sum(parts)


def _z_squared(t: np.ndarray) -> np.ndarray:
    """Z(t)^2 for arbitrary heights, switching evaluators at HEAD_SPLIT."""
    t = np.asarray(t, dtype=np.float64)
    out = np.empty_like(t)
    low = t < T_MIN
    if np.any(low):
        out[low] = np.abs(zeta_critical(t[low])) ** 2
    if np.any(~low):
        out[~low] = z_eval(t[~low]) ** 2
    return out


# ---------------------------------------------------------------------------
# moment cross-checks
# ---------------------------------------------------------------------------

def ingham_check(T: float, quad_points: int = DEFAULT_QUAD_POINTS):
    """Second moment of Z over [1, T] against its two-term asymptotic.

    Returns (lhs, rhs, diff) with lhs the gap-aligned quadrature of Z(t)^2,
    rhs = T log(T/2pi) + (2 gamma0 - 1) T, diff = lhs - rhs.  The remainder
    is O(T^(1/2+eps)), which the calibrated-bound tests rely on.
    """
    if not (100.0 <= T <= 1e5):
        raise ValueError("need 100 <= T <= 1e5")
    lhs = integrate_gap_aligned(_z_squared, T, quad_points)
    rhs = T * math.log(T / TWO_PI) + (2.0 * _GAMMA0 - 1.0) * T
    return lhs, rhs, lhs - rhs


def twisted_check(T: float, quad_points: int = DEFAULT_QUAD_POINTS):
    """Second moment twisted by the phase density against its asymptotic.

    lhs = -(1/2pi) int_1^T Re[chi'/chi(1/2+it)] Z(t)^2 dt; with
    L = log(T/2pi) the expected value is
    rhs = (T/2pi) L^2 + (T/2pi) L (2 gamma0 - 2) + (T/2pi)(2 - 2 gamma0).
    Returns (lhs, rhs, diff = lhs - rhs).
    """
    if not (100.0 <= T <= 1e5):
        raise ValueError("need 100 <= T <= 1e5")

    def integrand(t):
        t = np.asarray(t, dtype=np.float64)
        weight = -np.real(chi_logderiv(0.5 + 1j * t)) / TWO_PI
        return weight * _z_squared(t)

    lhs = integrate_gap_aligned(integrand, T, quad_points)
    L = math.log(T / TWO_PI)
    rhs = (T / TWO_PI) * (L * L + L * (-2.0 + 2.0 * _GAMMA0) + (2.0 - 2.0 * _GAMMA0))
    return lhs, rhs, lhs - rhs


def calibrate_moment_constant(check, T_cal: float = 1000.0,
                              safety: float = MOMENT_CAL_SAFETY) -> float:
    """Constant C with |diff(T)| <= C T^0.6 expected for T >= T_cal.

    Reads the remainder once at T_cal and applies a safety factor for the
    oscillation of the O(T^(1/2+eps)) term.
    """
    _, _, diff = check(T_cal)
    return safety * abs(diff) / T_cal ** 0.6


# ---------------------------------------------------------------------------
# figure data
# ---------------------------------------------------------------------------

def emit_figure_data(series: CumulativeSeries, alphas: AlphaSet, N_list,
                     path, stride: int = 1) -> None:
    """Write `t,true_cumulative,asym_N<i>...,err_N<i>...` rows as CSV.

    One row per record (decimated by stride); floats are rendered with 17
    significant digits so reruns on identical inputs are byte-identical.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    N_list = [int(N) for N in N_list]
    header = ["t", "true_cumulative"]
    header += ["asym_N%d" % N for N in N_list]
    header += ["err_N%d" % N for N in N_list]
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(0, len(series), stride):
            t = float(series.t_values[i])
            true_val = float(series.prefix[i])
            asym = [float(asymptotic_value(t, alphas, N)) for N in N_list]
            row = [t, true_val] + asym + [a - true_val for a in asym]
            fh.write(",".join("%.17g" % v for v in row) + "\n")
