"""Second moment of the Riemann zeta function at its local extrema.

Layers, bottom up:

  * :mod:`zetamax.series` -- truncated Laurent series arithmetic about s = 1
    and high-precision Stieltjes constants;
  * :mod:`zetamax.coefficients` -- the Laurent coefficient table c_{k,l}, the
    per-k coefficients beta_{k,n}, the expansion coefficients alpha_n, and the
    truncated asymptotic itself;
  * :mod:`zetamax.arithmetic` -- sieved arithmetic-function tables used as
    independent oracles (Mobius/Selberg identities, residue-vs-brute-force
    partial sums, Dirichlet-series cross-checks);
  * :mod:`zetamax.hardy` -- the Hardy Z evaluator, zero localization, and the
    per-gap extremum search;
  * :mod:`zetamax.experiment` -- cumulative sums, error tables, figure data,
    and the analytic moment cross-checks;
  * :mod:`zetamax.cli` -- the ``zetamax`` command-line entry point.
"""

from .series import (
    LaurentSeries,
    laurent,
    zeta_series,
    stieltjes,
    stieltjes_computed,
    load_stieltjes_table,
)
from .coefficients import (
    CoefficientTable,
    AlphaSet,
    build_c_table,
    beta,
    alpha,
    alpha_via_beta,
    build_alpha_set,
    asymptotic_value,
    optimal_truncation_eta,
    optimal_truncation_eta_roots,
    format_alpha,
)
from .arithmetic import (
    ArithmeticTables,
    build_tables,
    dirichlet_convolve,
    mobius_identity_check,
    selberg_identity_check,
    A_k_bruteforce,
    A_k_residue,
    calibrate_residue_constant,
    z1_logderiv_direct,
    dirichlet_expansion_partial,
    telescoping_residual,
)
from .hardy import (
    ZeroList,
    ExtremumRecord,
    theta,
    z_eval,
    chi_logderiv,
    f_of_s,
    find_zeros,
    load_zeros,
    find_extrema,
    find_extremum,
    write_extrema_csv,
    read_extrema_csv,
)
from .experiment import (
    CumulativeSeries,
    ErrorTable,
    cumulative,
    error_table,
    ingham_check,
    twisted_check,
    calibrate_moment_constant,
    emit_figure_data,
    zeta_critical,
)

__version__ = "0.1.0"
