"""Hardy Z-function evaluation, zero localization, and per-gap extremum search.

Z(t) is the real function with |Z(t)| = |zeta(1/2 + it)|; its sign changes are
the critical-line zeros of zeta.  Evaluation uses the Riemann-Siegel main sum

    Z(t) = 2 sum_{n <= floor(tau)} n^(-1/2) cos(theta(t) - t log n) + R(t),
    tau = sqrt(t / 2 pi),

with the remainder expanded through four correction terms

    R(t) ~ (-1)^(N-1) tau^(-1/2) (C0(p) + C1(p)/tau + C2(p)/tau^2 + C3(p)/tau^3),

p = tau - N.  The C_j are served from bundled Chebyshev fits on [0, 1]
(generated at high precision from the derivatives of
psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p); see demos/regenerate_data.py).
This gives roughly 4e-8 absolute accuracy at t = 100 improving like t^(-11/4),
far inside the location budget of the extremum search.

The phase theta(t) - t log n is computed in extended precision
(``numpy.longdouble``) and reduced mod 2 pi before the cosine: at t ~ 1e7 the
raw phase is ~1e8, and plain doubles would lose eight digits to cancellation.

Between consecutive zeros Z^2 has exactly one interior maximum (interlacing,
under RH), located here by bisection on the sign of the central-difference
derivative of Z^2.  Gaps where that derivative shows no sign change are
flagged, never silently dropped: a nonzero flag count is itself a reportable
failure of the interlacing property.
"""

from __future__ import annotations

import importlib.resources
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import numpy.polynomial.chebyshev as _cheb
import scipy.special as _sp

TWO_PI = 2.0 * np.pi
# extended-precision 2*pi: the double constant is off by ~4e-17 relative,
# which alone would cost 2e-10 absolute in theta at t = 1e7
TWO_PI_LD = np.longdouble("6.28318530717958647692528676655900576839")
T_MIN = 10.0
ZERO_TOL = 1e-8          # bisection tolerance for zero ordinates
GAP_LOCATION_FRACTION = 1e-4   # extremum location budget, fraction of the gap
_FIRST_ZERO = 14.134725


class DomainError(ValueError):
    """Argument outside the supported evaluation range."""


class MissedZeroError(RuntimeError):
    """Zero count in a window disagrees with theta-differencing after refinement."""


class DataIntegrityError(ValueError):
    """A zeros file failed validation."""


class SingularityError(ValueError):
    """chi'/chi evaluated at a pole of its cotangent/digamma factors."""


# ---------------------------------------------------------------------------
# Riemann-Siegel theta and Z
# ---------------------------------------------------------------------------

def theta(t):
    """Riemann-Siegel phase via the standard asymptotic expansion.

    theta(t) = t/2 log(t/2pi) - t/2 - pi/8 + 1/(48t) + 7/(5760 t^3)
               + 31/(80640 t^5), accurate to well below 1e-10 for t >= 10.
    Accepts scalars or arrays; computed in extended precision.
    """
    t = np.asarray(t, dtype=np.longdouble)
    if np.any(t < T_MIN):
        raise DomainError("theta requires t >= %g" % T_MIN)
    out = (
        t / 2 * np.log(t / TWO_PI_LD)
        - t / 2
        - TWO_PI_LD / 16
        + 1 / (48 * t)
        + 7 / (5760 * t ** 3)
        + 31 / (80640 * t ** 5)
        + 127 / (430080 * t ** 7)
    )
    return out if out.shape else out[()]


def _load_rs_corrections():
    with importlib.resources.files("zetamax").joinpath("_data/rs_correction.npz").open("rb") as fh:
        data = np.load(io.BytesIO(fh.read()))
        return [data["C%d" % j] for j in range(4)]


_RS_CHEB = None


def _rs_corrections(p):
    """C0..C3 at p in [0, 1], from the bundled Chebyshev tables."""
    global _RS_CHEB
    if _RS_CHEB is None:
        _RS_CHEB = _load_rs_corrections()
    x = 2.0 * p - 1.0
    return [_cheb.chebval(x, c) for c in _RS_CHEB]


def z_eval(t):
    """Hardy Z at t (scalar or array), t >= 10.

    Vectorized over arrays; batches with widely differing heights are
    processed in one call with the main sum masked per element.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if np.any(t_arr < T_MIN):
        raise DomainError("z_eval requires t >= %g" % T_MIN)
    out = np.empty_like(t_arr)
    chunk = 2048
    for i in range(0, len(t_arr), chunk):
        out[i : i + chunk] = _z_eval_chunk(t_arr[i : i + chunk])
    if np.isscalar(t) or np.asarray(t).shape == ():
        return float(out[0])
    return out


def _z_eval_chunk(t):
    tl = t.astype(np.longdouble)
    tau = np.sqrt(tl / TWO_PI_LD)
    N = np.floor(tau).astype(np.int64)
    p = (tau - N).astype(np.float64)
    th = theta(tl)

    n_max = int(N.max())
    n = np.arange(1, n_max + 1, dtype=np.longdouble)
    # phase matrix reduced mod 2pi in extended precision, cosine in double
    phase = th[:, None] - tl[:, None] * np.log(n)[None, :]
    phase = np.remainder(phase, TWO_PI_LD).astype(np.float64)
    terms = np.cos(phase) / np.sqrt(n.astype(np.float64))[None, :]
    mask = (np.arange(1, n_max + 1)[None, :] <= N[:, None])
    main = 2.0 * np.sum(terms * mask, axis=1)

    c0, c1, c2, c3 = _rs_corrections(p)
    tau64 = tau.astype(np.float64)
    corr = c0 + c1 / tau64 + c2 / tau64 ** 2 + c3 / tau64 ** 3
    sign = np.where(N % 2 == 1, 1.0, -1.0)  # (-1)^(N-1)
    return main + sign * corr / np.sqrt(tau64)


# ---------------------------------------------------------------------------
# chi'/chi and f(s)
# ---------------------------------------------------------------------------

def _stable_cot(z):
    """cot(z) without overflow for large |Im z|."""
    z = np.asarray(z, dtype=np.complex128)
    flip = z.imag < 0
    zz = np.where(flip, np.conj(z), z)
    e = np.exp(2j * zz)   # |e| <= 1 since Im zz >= 0
    out = 1j * (e + 1.0) / (e - 1.0)
    return np.where(flip, np.conj(out), out)


def chi_logderiv(s):
    """chi'/chi(s) for chi(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s).

    chi'/chi(s) = log(2 pi) + (pi/2) cot(pi s / 2) - digamma(1 - s).
    Vectorized; requires |Im s| >= 1 and |Re s| <= 10 (safely away from the
    poles of the cotangent and digamma factors).
    """
    s = np.asarray(s, dtype=np.complex128)
    if np.any(np.abs(s.imag) < 1.0) or np.any(np.abs(s.real) > 10.0):
        raise SingularityError("chi_logderiv needs |Im s| >= 1 and |Re s| <= 10")
    out = math.log(TWO_PI) + np.pi / 2 * _stable_cot(np.pi * s / 2) - _sp.digamma(1.0 - s)
    return out if out.shape else complex(out)


def f_of_s(s):
    """f(s) = -(1/2) chi'/chi(s), approximately (1/2) log(t / 2 pi)."""
    return -0.5 * np.asarray(chi_logderiv(s))[()] if np.asarray(s).shape == () else -0.5 * chi_logderiv(s)


def f_prime(s):
    """f'(s) = -(1/2) d/ds [chi'/chi](s), via high-precision special functions."""
    import mpmath as mp

    s = complex(s)
    if abs(s.imag) < 1.0 or abs(s.real) > 10.0:
        raise SingularityError("f_prime needs |Im s| >= 1 and |Re s| <= 10")
    z = mp.mpc(s)
    # d/ds [(pi/2) cot(pi s/2)] = -(pi^2/4) csc^2(pi s/2); d/ds[-psi(1-s)] = psi'(1-s)
    val = -(mp.pi ** 2) / 4 / mp.sin(mp.pi * z / 2) ** 2 + mp.polygamma(1, 1 - z)
    return complex(-0.5 * val)


# ---------------------------------------------------------------------------
# zero localization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroList:
    """Ascending zero ordinates with provenance."""

    ordinates: np.ndarray
    source: str            # "computed" or "file"
    height_max: float

    def __len__(self):
        return len(self.ordinates)


def mean_gap(t: float) -> float:
    """Average spacing of zeros near height t: 2 pi / log(t / 2 pi)."""
    return TWO_PI / math.log(t / TWO_PI)


def expected_count(t_lo: float, t_hi: float) -> float:
    """theta-differencing estimate of the zero count in (t_lo, t_hi]."""
    return float((theta(t_hi) - theta(t_lo)) / np.pi)


def _bisect_signs(lo, hi, flo, func, tol):
    """Vectorized sign bisection of func over bracket arrays [lo, hi]."""
    lo = lo.copy()
    hi = hi.copy()
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        fmid = func(mid)
        left = (fmid < 0) == (flo < 0)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fmid, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def _scan_window(t_lo: float, t_hi: float, step: float, rescue: bool = True):
    """Grid-scan sign changes of Z and bisect each to ZERO_TOL.

    A pair of zeros inside one grid cell flips the sign twice and is invisible
    to the coarse scan, but it forces |Z| far below its typical size nearby.
    Every suspiciously small local minimum of |Z| without an adjacent sign
    change is therefore rescanned at step/64 and any zeros found are merged in.
    """
    grid = np.arange(t_lo, t_hi + step, step)
    grid = grid[grid <= t_hi + step]
    z = z_eval(grid)
    flips = np.nonzero(np.signbit(z[:-1]) != np.signbit(z[1:]))[0]
    found = []
    if len(flips):
        lo = grid[flips]
        hi = grid[flips + 1]
        found.append(_bisect_signs(lo, hi, z[flips], z_eval, ZERO_TOL))
    if rescue and len(grid) >= 5:
        absz = np.abs(z)
        scale = np.median(absz)
        interior = np.arange(1, len(grid) - 1)
        dips = interior[
            (absz[interior] < absz[interior - 1])
            & (absz[interior] < absz[interior + 1])
            & (absz[interior] < 0.25 * scale)
        ]
        flip_set = set(flips.tolist())
        for i in dips:
            if flip_set.intersection(range(i - 2, i + 2)):
                continue
            found.append(
                _scan_window(grid[max(i - 2, 0)], grid[min(i + 2, len(grid) - 1)],
                             step / 64.0, rescue=False)
            )
    if not found:
        return np.empty(0)
    zeros = np.unique(np.concatenate(found))
    return zeros[(zeros > t_lo) & (zeros <= t_hi)]


def find_zeros(t_lo: float, t_hi: float) -> ZeroList:
    """All zeros in (t_lo, t_hi], located to about 1e-8.

    Scans on a grid of (mean gap)/8 and bisects sign changes.  A pair of
    zeros closer than the grid step leaves the count short by exactly 2, so
    any window whose count differs from the theta-differencing prediction by
    more than 1 is rescanned at step/4 and then step/16 (the second retry
    catches near-degenerate Lehmer pairs).  A persistent local mismatch is
    tolerated when the cumulative count since ``t_lo`` still tracks the phase
    prediction (the fluctuating term in the zero-counting formula can swing a
    single window without any zero being missed); a cumulative drift beyond 3
    raises :class:`MissedZeroError`.
    """
    if not (14.0 <= t_lo <= t_hi):
        raise DomainError("need 14 <= t_lo <= t_hi")
    if t_hi == t_lo:
        return ZeroList(np.empty(0), "computed", t_hi)
    all_zeros = []
    found_total = 0
    window = max(50.0 * mean_gap(t_hi), 10.0)
    a = t_lo
    while a < t_hi:
        b = min(a + window, t_hi)
        step = mean_gap(b) / 8.0
        zeros = _scan_window(a, b, step)
        expect = expected_count(a, b)
        attempt = 0
        while abs(len(zeros) - expect) > 1.0 and attempt < 2:
            step /= 4.0
            zeros = _scan_window(a, b, step)
            attempt += 1
        found_total += len(zeros)
        drift = abs(found_total - expected_count(t_lo, b))
        if abs(len(zeros) - expect) > 1.0 and drift > 3.0:
            raise MissedZeroError(
                "window (%.6f, %.6f): found %d zeros, theta-differencing expects "
                "%.2f and the cumulative count has drifted by %.2f"
                % (a, b, len(zeros), expect, drift)
            )
        all_zeros.append(zeros)
        a = b
    ordinates = np.concatenate(all_zeros) if all_zeros else np.empty(0)
    ordinates = np.unique(ordinates)
    return ZeroList(ordinates, "computed", t_hi)


def load_zeros(path: str, validate_every: int = 100) -> ZeroList:
    """Read a zeros file: one ascending decimal ordinate per line, '#' comments.

    Every ``validate_every``-th ordinate is verified to bracket a sign change
    of Z within +-1e-4.  Violations raise :class:`DataIntegrityError` with the
    offending line number.
    """
    ordinates = []
    lines = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            try:
                value = float(text)
            except ValueError as exc:
                raise DataIntegrityError("line %d: not a number: %r" % (lineno, text)) from exc
            if ordinates and value <= ordinates[-1]:
                raise DataIntegrityError(
                    "line %d: ordinate %s not ascending" % (lineno, text)
                )
            ordinates.append(value)
            lines.append(lineno)
    arr = np.array(ordinates)
    if len(arr) == 0:
        return ZeroList(arr, "file", 0.0)
    check_idx = np.arange(0, len(arr), max(1, validate_every))
    for i in check_idx:
        g = arr[i]
        if z_eval(g - 1e-4) * z_eval(g + 1e-4) > 0:
            raise DataIntegrityError(
                "line %d: ordinate %.6f is not a sign change of Z within 1e-4"
                % (lines[i], g)
            )
    return ZeroList(arr, "file", float(arr[-1]))


# ---------------------------------------------------------------------------
# extrema
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtremumRecord:
    """The located maximum of Z^2 in one zero gap."""

    index: int
    gamma_lo: float
    gamma_hi: float
    t_star: float
    z2: float
    location_tol: float
    flagged: bool = False


def _z2_derivative_sign(t, h):
    """Central-difference derivative of Z^2 (vectorized)."""
    return z_eval(t + h) ** 2 - z_eval(t - h) ** 2


def find_extrema_batch(ordinates: np.ndarray, start_index: int = 0):
    """Extremum records for every consecutive-zero gap in ``ordinates``.

    Bisection on the sign of the central-difference derivative of Z^2
    (step h = 1e-6 * gap), starting from the bracket offset 0.01 * gap inside
    the endpoints and widening toward them if the derivative does not change
    sign there.  Terminates below 1e-4 * gap.  Gaps with no derivative sign
    change at the widest bracket are flagged.
    """
    g_lo = np.asarray(ordinates[:-1], dtype=np.float64)
    g_hi = np.asarray(ordinates[1:], dtype=np.float64)
    n = len(g_lo)
    if n == 0:
        return []
    gap = g_hi - g_lo
    h = 1e-6 * gap
    flagged = np.zeros(n, dtype=bool)
    lo = g_lo + 0.01 * gap
    hi = g_hi - 0.01 * gap
    d_lo = _z2_derivative_sign(lo, h)
    d_hi = _z2_derivative_sign(hi, h)
    for offset in (1e-3, 1e-5):
        bad = (d_lo <= 0) | (d_hi >= 0)
        if not np.any(bad):
            break
        lo = np.where(bad, g_lo + offset * gap, lo)
        hi = np.where(bad, g_hi - offset * gap, hi)
        d_lo = np.where(bad, _z2_derivative_sign(lo, h), d_lo)
        d_hi = np.where(bad, _z2_derivative_sign(hi, h), d_hi)
    flagged = (d_lo <= 0) | (d_hi >= 0)

    tol = GAP_LOCATION_FRACTION * gap
    while np.any((hi - lo) > tol):
        mid = 0.5 * (lo + hi)
        d_mid = _z2_derivative_sign(mid, h)
        rising = d_mid > 0
        lo = np.where(rising, mid, lo)
        hi = np.where(rising, hi, mid)
    t_star = 0.5 * (lo + hi)
    z2 = z_eval(t_star) ** 2
    return [
        ExtremumRecord(
            start_index + i,
            float(g_lo[i]),
            float(g_hi[i]),
            float(t_star[i]),
            float(z2[i]),
            float(hi[i] - lo[i]),
            bool(flagged[i]),
        )
        for i in range(n)
    ]


def find_extremum(gamma_lo: float, gamma_hi: float, index: int = 0) -> ExtremumRecord:
    """Extremum record for a single gap (see :func:`find_extrema_batch`)."""
    if not gamma_lo < gamma_hi:
        raise DomainError("need gamma_lo < gamma_hi")
    return find_extrema_batch(np.array([gamma_lo, gamma_hi]), start_index=index)[0]


def _extrema_worker(args):
    ordinates, start_index = args
    return find_extrema_batch(ordinates, start_index)


def find_extrema(zeros: ZeroList, workers: int = 1):
    """Extremum records for every gap of a ZeroList, optionally in parallel.

    Gap batches are disjoint; results are merged in ascending index order so
    output is identical for any worker count.
    """
    ordinates = zeros.ordinates
    if len(ordinates) < 2:
        return []
    if workers <= 1:
        return find_extrema_batch(ordinates)
    n_gaps = len(ordinates) - 1
    batch = max(1, -(-n_gaps // (workers * 4)))
    jobs = [
        (ordinates[i : i + batch + 1], i)
        for i in range(0, n_gaps, batch)
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_extrema_worker, jobs))
    records = [r for chunk in results for r in chunk]
    records.sort(key=lambda r: r.index)
    return records


def write_extrema_csv(records, path: str) -> None:
    """CSV with header index,gamma_lo,gamma_hi,t_star,z2 (17 significant digits)."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write("index,gamma_lo,gamma_hi,t_star,z2\n")
        for r in records:
            fh.write(
                "%d,%.17g,%.17g,%.17g,%.17g\n"
                % (r.index, r.gamma_lo, r.gamma_hi, r.t_star, r.z2)
            )


def read_extrema_csv(path: str):
    """Inverse of :func:`write_extrema_csv`."""
    records = []
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != "index,gamma_lo,gamma_hi,t_star,z2":
            raise DataIntegrityError("unexpected extrema CSV header: %r" % header)
        for line in fh:
            idx, glo, ghi, ts, z2 = line.strip().split(",")
            records.append(
                ExtremumRecord(int(idx), float(glo), float(ghi), float(ts), float(z2),
                               GAP_LOCATION_FRACTION * (float(ghi) - float(glo)))
            )
    return records
