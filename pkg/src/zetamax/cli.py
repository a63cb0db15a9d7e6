"""Command-line entry point: ``zetamax <subcommand>``.

Subcommands::

  coeffs    compute the expansion coefficients alpha_n; write CSV + text table
  verify    run the identity and oracle suites; one PASS/FAIL line each
  zeros     locate critical-line zeros; write a one-ordinate-per-line file
  extrema   per-gap extremum records (checkpointed CSV shards, merged)
  tables    error table against the cumulative sum, plus figure data
  figure    figure-data CSV only

Configuration precedence: command-line flags, then ``ZX_``-prefixed
environment variables, then a ``key=value`` config file (``--config``), then
built-in defaults.

Exit codes: 0 success; 1 I/O failure; 2 non-convergence or invalid
configuration; 3 a verification property failed; 4 missed-zero error;
5 zeros-file integrity error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import arithmetic, coefficients, experiment, hardy
from .coefficients import NonConvergenceError
from .hardy import DataIntegrityError, MissedZeroError, ZeroList

EXIT_OK = 0
EXIT_IO = 1
EXIT_NONCONVERGENCE = 2
EXIT_PROPERTY = 3
EXIT_MISSED_ZERO = 4
EXIT_DATA_INTEGRITY = 5

CHECKPOINT_BLOCK = 10_000

_DEFAULTS = {
    "digits": 50,
    "k_max": 80,
    "n_max": 18,
    "x_max": 100_000,
    "workers": 1,
    "output_dir": ".",
    "stride": 1,
    "tail_tol": 1e-18,
    "zeros_file": None,
    "zero_count": None,
    "t_max": None,
    "n_list": None,
    "report": False,
}

_INT_KEYS = {"digits", "k_max", "n_max", "x_max", "workers", "stride", "zero_count"}
_FLOAT_KEYS = {"tail_tol", "t_max"}
_BOOL_KEYS = {"report"}


@dataclass(frozen=True)
class RunConfig:
    """Resolved run configuration shared by all subcommands."""

    digits: int
    k_max: int
    n_max: int
    x_max: int
    workers: int
    output_dir: str
    stride: int
    tail_tol: float
    zeros_file: str | None
    zero_count: int | None
    t_max: float | None
    n_list: tuple | None
    report: bool


class ConfigError(ValueError):
    """Invalid or contradictory configuration."""


def _parse_config_file(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            if "=" not in text:
                raise ConfigError("%s:%d: expected key=value" % (path, lineno))
            key, _, value = text.partition("=")
            values[key.strip()] = value.strip()
    return values


def _coerce(key: str, value):
    if value is None or not isinstance(value, str):
        return value
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    if key in _BOOL_KEYS:
        return value.lower() in ("1", "true", "yes")
    if key == "n_list":
        return tuple(int(part) for part in value.split(","))
    return value


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge flags, ZX_ environment variables, config file, and defaults."""
    file_values = {}
    if getattr(args, "config", None):
        file_values = _parse_config_file(args.config)
    resolved = {}
    for key, default in _DEFAULTS.items():
        value = getattr(args, key, None)
        if value is None:
            value = os.environ.get("ZX_" + key.upper())
        if value is None:
            value = file_values.get(key)
        if value is None:
            value = default
        resolved[key] = _coerce(key, value)
    if isinstance(resolved["n_list"], str):
        resolved["n_list"] = _coerce("n_list", resolved["n_list"])
    cfg = RunConfig(**resolved)
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    if cfg.n_max > 10 and cfg.digits < 30:
        raise ConfigError("n_max > 10 requires digits >= 30")
    if cfg.t_max is not None and cfg.zero_count is not None:
        raise ConfigError("set exactly one of --t-max / --zero-count")
    return cfg


# ---------------------------------------------------------------------------
# zero-source resolution shared by zeros / extrema / tables
# ---------------------------------------------------------------------------

def _height_for_count(count: int) -> float:
    """Height T below which roughly `count` zeros lie (with a small margin)."""
    target = count + 3.0
    lo, hi = 15.0, 100.0
    while hardy.expected_count(14.0, hi) < target:
        lo, hi = hi, hi * 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if hardy.expected_count(14.0, mid) < target:
            lo = mid
        else:
            hi = mid
    return hi


def _resolve_zeros(cfg: RunConfig) -> ZeroList:
    if cfg.zeros_file is not None:
        return hardy.load_zeros(cfg.zeros_file)
    if cfg.zero_count is not None:
        if cfg.zero_count == 0:
            return ZeroList(np.empty(0), "computed", 0.0)
        zeros = hardy.find_zeros(14.0, _height_for_count(cfg.zero_count))
        if len(zeros) < cfg.zero_count:
            raise MissedZeroError(
                "located %d zeros, requested %d" % (len(zeros), cfg.zero_count)
            )
        ords = zeros.ordinates[: cfg.zero_count]
        return ZeroList(ords, zeros.source, float(ords[-1]))
    t_max = cfg.t_max if cfg.t_max is not None else 1000.0
    return hardy.find_zeros(14.0, t_max)


def _default_n_list(cfg: RunConfig):
    return cfg.n_list if cfg.n_list is not None else tuple(range(-2, cfg.n_max + 1))


def _build_alphas(cfg: RunConfig, n_max: int):
    n_max = max(0, n_max)
    table = coefficients.build_c_table(cfg.k_max, n_max + 3, cfg.digits)
    return coefficients.build_alpha_set(table, n_max, cfg.tail_tol)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_coeffs(cfg: RunConfig) -> int:
    alphas = _build_alphas(cfg, cfg.n_max)
    os.makedirs(cfg.output_dir, exist_ok=True)
    csv_path = os.path.join(cfg.output_dir, "alpha.csv")
    txt_path = os.path.join(cfg.output_dir, "alpha_table.txt")
    with open(csv_path, "w", encoding="ascii") as fh:
        fh.write("n,alpha\n")
        for n in range(-2, cfg.n_max + 1):
            fh.write("%d,%.17g\n" % (n, float(alphas.value(n))))
    with open(txt_path, "w", encoding="ascii") as fh:
        for n in range(-2, cfg.n_max + 1):
            fh.write("%d\t%s\n" % (n, coefficients.format_alpha(n, alphas.value(n))))
    print("wrote %s and %s (n = -2 .. %d)" % (csv_path, txt_path, cfg.n_max))
    return EXIT_OK


def _verify_suite(cfg: RunConfig):
    """Yield (name, passed, detail) for each verification property."""
    from .series import stieltjes, stieltjes_computed

    worst = max(
        abs(stieltjes(j, 30) - stieltjes_computed(j, 30)) for j in range(0, 7)
    )
    yield "stieltjes-table", worst < 1e-25, "max |table - computed| = %.2e" % float(worst)

    table = coefficients.build_c_table(min(cfg.k_max, 20), 6, cfg.digits)
    import mpmath as mp

    with mp.workdps(cfg.digits):
        g0, g1 = stieltjes(0, cfg.digits), stieltjes(1, cfg.digits)
        worst = mp.mpf(0)
        for k in range(1, table.K_max + 1):
            worst = max(worst, abs(table.value(k, 0) - 1))
            worst = max(worst, abs(table.value(k, 1) - (-1 - (k - 3) * g0)))
            closed = 1 + (k - 3) * g0 + mp.mpf(k - 1) * (k - 4) / 2 * g0 ** 2 + 2 * (k - 3) * g1
            worst = max(worst, abs(table.value(k, 2) - closed))
    yield "c-closed-forms", worst < mp.mpf("1e-30"), "max deviation = %s (k <= %d)" % (
        mp.nstr(worst, 3), table.K_max)

    tables = arithmetic.build_tables(cfg.x_max, 4)
    err = arithmetic.mobius_identity_max_error(tables)
    yield "mobius", err <= arithmetic.IDENTITY_RTOL, "max rel err %.2e (n <= %d)" % (err, cfg.x_max)
    err = arithmetic.selberg_identity_max_error(tables)
    yield "selberg", err <= arithmetic.IDENTITY_RTOL, "max rel err %.2e (n <= %d)" % (err, cfg.x_max)

    n_small = min(cfg.x_max, 10_000)
    ok = True
    for j, k in ((1, 1), (1, 2), (2, 2), (1, 3)):
        lhs = arithmetic.dirichlet_convolve(
            tables.lambda_k[j][: n_small + 1], tables.lambda_k[k][: n_small + 1]
        )
        rel = np.max(np.abs(lhs - tables.lambda_k[j + k][: n_small + 1])) / max(
            1.0, np.max(np.abs(tables.lambda_k[j + k][: n_small + 1]))
        )
        ok = ok and rel <= arithmetic.IDENTITY_RTOL
    yield "lambda-convolution", ok, "Lambda_j * Lambda_k = Lambda_{j+k}, j+k <= 4, n <= %d" % n_small

    n = np.arange(1, len(tables.lam))
    a1 = tables.a_k[1][1:]
    expected = tables.lam[1:] * np.log(n)
    err = float(np.max(np.abs(a1 - expected)))
    yield "a1-definition", err < 1e-12, "max |a_1 - Lambda log| = %.2e" % err

    ctable = coefficients.build_c_table(10, 8, 30)
    x_cal = max(cfg.x_max // 100, 300)
    points = [x for x in (cfg.x_max // 10, cfg.x_max) if x > x_cal]
    ok = True
    detail = []
    for k in (1, 2, 3):
        C = arithmetic.calibrate_residue_constant(k, tables, ctable, x_cal)
        for x in points:
            ratio = abs(
                arithmetic.A_k_bruteforce(k, x, tables) - arithmetic.A_k_residue(k, x, ctable)
            ) / x ** 0.6
            ok = ok and ratio <= C
        detail.append("k=%d C=%.2f" % (k, C))
    yield "residue-bound", ok, "; ".join(detail) + " at x in %s" % points

    s = 3 + 200j
    direct = arithmetic.z1_logderiv_direct(s)
    part = arithmetic.dirichlet_expansion_partial(s, 4, min(cfg.x_max, 20_000), tables)
    bound = direct.tail + part.tail + 10.0 / (abs(s.imag) * math.log(abs(s.imag)))
    diff = abs(direct.value - part.value)
    yield "dirichlet-expansion", diff <= bound, "diff %.2e <= bound %.2e at s=3+200i" % (diff, bound)

    lhs, rhs = arithmetic.telescoping_residual(3.0, 2, min(cfg.x_max, 20_000), tables)
    err = abs(lhs - rhs)
    yield "telescoping", err < 1e-12, "|lhs - rhs| = %.2e at s=3" % err


def cmd_verify(cfg: RunConfig) -> int:
    failed = []
    for name, passed, detail in _verify_suite(cfg):
        print("%s: %s (%s)" % (name, "PASS" if passed else "FAIL", detail))
        if not passed:
            failed.append(name)
    if failed:
        print("failed properties: %s" % ", ".join(failed))
        return EXIT_PROPERTY
    return EXIT_OK


def cmd_zeros(cfg: RunConfig) -> int:
    zeros = _resolve_zeros(cfg)
    os.makedirs(cfg.output_dir, exist_ok=True)
    path = os.path.join(cfg.output_dir, "zeros.txt")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("# critical-line zero ordinates, ascending\n")
        for g in zeros.ordinates:
            fh.write("%.17g\n" % g)
    print("wrote %s (%d zeros, height <= %.6f)"
          % (path, len(zeros), zeros.height_max if len(zeros) else 0.0))
    return EXIT_OK


def _extrema_records(cfg: RunConfig, zeros: ZeroList):
    """Per-gap records, computed in checkpointed blocks of CHECKPOINT_BLOCK.

    Shard CSVs live under <output_dir>/extrema_shards and are reused on rerun,
    so an interrupted long run resumes where it stopped; the merged output is
    identical either way.
    """
    ordinates = zeros.ordinates
    n_gaps = max(len(ordinates) - 1, 0)
    shard_dir = os.path.join(cfg.output_dir, "extrema_shards")
    os.makedirs(shard_dir, exist_ok=True)
    records = []
    for start in range(0, n_gaps, CHECKPOINT_BLOCK):
        stop = min(start + CHECKPOINT_BLOCK, n_gaps)
        shard = os.path.join(shard_dir, "shard_%07d.csv" % start)
        block = None
        if os.path.exists(shard):
            block = hardy.read_extrema_csv(shard)
            if len(block) != stop - start:
                block = None
        if block is None:
            sub = ZeroList(ordinates[start: stop + 1], zeros.source,
                           float(ordinates[stop]))
            block = hardy.find_extrema(sub, workers=cfg.workers)
            block = [
                hardy.ExtremumRecord(r.index + start, r.gamma_lo, r.gamma_hi,
                                     r.t_star, r.z2, r.location_tol, r.flagged)
                for r in block
            ]
            hardy.write_extrema_csv(block, shard)
        records.extend(block)
    return records


def cmd_extrema(cfg: RunConfig) -> int:
    zeros = _resolve_zeros(cfg)
    os.makedirs(cfg.output_dir, exist_ok=True)
    records = _extrema_records(cfg, zeros)
    path = os.path.join(cfg.output_dir, "extrema.csv")
    hardy.write_extrema_csv(records, path)
    flagged = sum(1 for r in records if r.flagged)
    max_tol = max((r.location_tol for r in records), default=0.0)
    print("wrote %s: %d records, %d flagged, max location_tol %.3g"
          % (path, len(records), flagged, max_tol))
    return EXIT_OK


def _load_or_build_series(cfg: RunConfig):
    path = os.path.join(cfg.output_dir, "extrema.csv")
    if os.path.exists(path):
        records = hardy.read_extrema_csv(path)
    else:
        records = _extrema_records(cfg, _resolve_zeros(cfg))
    return experiment.cumulative(records)


def cmd_tables(cfg: RunConfig) -> int:
    series = _load_or_build_series(cfg)
    n_list = _default_n_list(cfg)
    alphas = _build_alphas(cfg, max(n_list))
    table = experiment.error_table(series, alphas, n_list)
    os.makedirs(cfg.output_dir, exist_ok=True)
    path = os.path.join(cfg.output_dir, "error_table.csv")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("# T_ref=%.17g true_sum=%.17g sign: error = asymptotic - true\n"
                 % (table.T_ref, table.true_sum))
        fh.write("N,error\n")
        for N, err in table.rows:
            fh.write("%d,%.17g\n" % (N, err))
    fig_path = os.path.join(cfg.output_dir, "figure_data.csv")
    experiment.emit_figure_data(series, alphas, n_list, fig_path, cfg.stride)
    print("wrote %s and %s (T_ref %.6f, true sum %.6g)"
          % (path, fig_path, table.T_ref, table.true_sum))
    if cfg.report:
        for N, err in table.rows:
            print("N=%3d  error=%14.2f" % (N, err))
    return EXIT_OK


def cmd_figure(cfg: RunConfig) -> int:
    series = _load_or_build_series(cfg)
    n_list = _default_n_list(cfg)
    alphas = _build_alphas(cfg, max(n_list))
    os.makedirs(cfg.output_dir, exist_ok=True)
    fig_path = os.path.join(cfg.output_dir, "figure_data.csv")
    experiment.emit_figure_data(series, alphas, n_list, fig_path, cfg.stride)
    print("wrote %s (%d rows, stride %d)"
          % (fig_path, -(-len(series) // cfg.stride), cfg.stride))
    return EXIT_OK


_COMMANDS = {
    "coeffs": cmd_coeffs,
    "verify": cmd_verify,
    "zeros": cmd_zeros,
    "extrema": cmd_extrema,
    "tables": cmd_tables,
    "figure": cmd_figure,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetamax",
        description="Asymptotics of the second moment of zeta at its critical-line extrema.",
    )
    parser.add_argument("--config", help="key=value configuration file")
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "coeffs": "compute expansion coefficients alpha_n (CSV + text table)",
        "verify": "run identity and oracle suites (one PASS/FAIL line each)",
        "zeros": "locate critical-line zeros and write them to a text file",
        "extrema": "locate the local maximum of Z^2 in each zero gap",
        "tables": "error table of the truncated asymptotic vs the true sum",
        "figure": "per-record figure data CSV",
    }
    for name, desc in descriptions.items():
        p = sub.add_parser(name, help=desc, description=desc)
        p.add_argument("--digits", type=int, help="working precision (default 50)")
        p.add_argument("--k-max", dest="k_max", type=int, help="k-sum cap (default 80)")
        p.add_argument("--n-max", dest="n_max", type=int, help="largest truncation order N (default 18)")
        p.add_argument("--x-max", dest="x_max", type=int, help="sieve extent for verify (default 100000)")
        p.add_argument("--workers", type=int, help="parallel workers (default 1)")
        p.add_argument("--output-dir", dest="output_dir", help="artifact directory (default .)")
        p.add_argument("--zeros-file", dest="zeros_file", help="read zeros from this file")
        p.add_argument("--zero-count", dest="zero_count", type=int, help="number of zeros to use")
        p.add_argument("--t-max", dest="t_max", type=float, help="height cap (alternative to --zero-count)")
        p.add_argument("--stride", type=int, help="row decimation for figure data (default 1)")
        p.add_argument("--tail-tol", dest="tail_tol", type=float, help="adaptive k-sum tail tolerance")
        p.add_argument("--n-list", dest="n_list", help="comma-separated truncation orders, e.g. -2,0,2")
        p.add_argument("--report", action="store_const", const=True, default=None,
                       help="print a human-readable summary")
        p.add_argument("--config", help="key=value configuration file")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print("configuration error: %s" % exc, file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except NonConvergenceError as exc:
        print("non-convergence: %s" % exc, file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except MissedZeroError as exc:
        print("missed zero: %s" % exc, file=sys.stderr)
        return EXIT_MISSED_ZERO
    except DataIntegrityError as exc:
        print("data integrity: %s" % exc, file=sys.stderr)
        return EXIT_DATA_INTEGRITY
    except OSError as exc:
        print("i/o error: %s" % exc, file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
