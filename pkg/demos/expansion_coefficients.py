"""Build the expansion coefficients alpha_n and show the two independent routes.

The asymptotic expansion of the cumulative sum of Z^2 over the local maxima
up to height T has the shape

    (T / 2 pi) * [ e^2/4 * L^2 + sum_{n >= -2} alpha_n / L^n ],   L = log(T / 2 pi),

where each alpha_n is a (rapidly converging) sum over Laurent coefficients
c_{k,l} of powers of zeta about s = 1.  This script:

  * builds the c-table from exact Laurent-series arithmetic,
  * evaluates alpha_n two independent ways (a direct double sum, and via the
    beta_{k,n} decomposition) and shows their agreement,
  * checks the closed forms available at n = -2, -1, 0, e.g.
    alpha_{-2} = (e^2 - 5)/2,
  * prints the table of alpha_1 .. alpha_18 in the conventional rounding.

Run:  python3 demos/expansion_coefficients.py
"""

import mpmath as mp

from zetamax.coefficients import (
    alpha,
    alpha_via_beta,
    build_alpha_set,
    build_c_table,
    format_alpha,
)
from zetamax.series import stieltjes

if __name__ == "__main__":
    print("building c-table (K_max=60, L_max=25, 50 digits)...")
    table = build_c_table(60, 25)

    with mp.workdps(50):
        print("\nclosed-form checks:")
        ref = (mp.e ** 2 - 5) / 2
        print("  alpha_-2  = %s   vs (e^2-5)/2 diff %s"
              % (mp.nstr(alpha(-2, table), 12), mp.nstr(abs(alpha(-2, table) - ref), 3)))
        g0 = stieltjes(0)
        ref = 5 - mp.e ** 2 - 10 * g0 + 2 * mp.e ** 2 * g0
        print("  alpha_-1  = %s   closed-form diff %s"
              % (mp.nstr(alpha(-1, table), 12), mp.nstr(abs(alpha(-1, table) - ref), 3)))

        print("\ndual-route agreement (direct double sum vs beta decomposition):")
        for n in (-2, 0, 5, 12, 18):
            a, b = alpha(n, table), alpha_via_beta(n, table)
            rel = abs(a - b) / max(abs(a), mp.mpf(1))
            print("  n=%3d  rel diff %s" % (n, mp.nstr(rel, 3)))

    print("\nalpha table (n = 1..18):")
    alphas = build_alpha_set(table, 18)
    for n in range(1, 19):
        print("  %2d  %s" % (n, format_alpha(n, alphas.alpha[n])))
