"""Partial sums of higher divisor-type coefficients vs their residue formulas.

The coefficients a_k(m) defined by (zeta'(s)/zeta(s))' * zeta(s)^k (the same
generating objects that feed the expansion coefficients) have partial sums

    A_k(x) = sum_{m <= x} a_k(m)

whose main term is the residue at s = 1 of the generating Dirichlet series
times x^s / s -- a polynomial in log x of degree k - 1, with coefficients
read directly off the Laurent c-table.  This script sieves the a_k(m) by
direct convolution, evaluates the residue polynomial, and shows the
remainder staying inside a calibrated O(x^0.6) envelope.

Run:  python3 demos/divisor_residues.py
"""

import numpy as np

from zetamax.arithmetic import (
    A_k_bruteforce,
    A_k_residue,
    build_tables,
    calibrate_residue_constant,
    mobius_identity_max_error,
    selberg_identity_max_error,
)
from zetamax.coefficients import build_c_table

X_MAX = 100_000

if __name__ == "__main__":
    print("sieving multiplicative tables to x = %d ..." % X_MAX)
    tables = build_tables(X_MAX, 4)
    print("  Mobius identity max error:  %.2e" % mobius_identity_max_error(tables))
    print("  Selberg identity max error: %.2e" % selberg_identity_max_error(tables))

    ctable = build_c_table(10, 8, 30)
    print("\nA_k(x) brute force vs residue polynomial:")
    for k in (1, 2, 3):
        C = calibrate_residue_constant(k, tables, ctable, x_cal=1000.0)
        print("  k = %d (calibrated envelope C = %.2f):" % (k, C))
        for x in np.array([1e3, 1e4, 1e5]):
            bf = A_k_bruteforce(k, x, tables)
            res = A_k_residue(k, x, ctable)
            print("    x = %7.0f  brute %14.2f  residue %14.2f  |diff|/x^0.6 = %6.3f"
                  % (x, bf, res, abs(bf - res) / x ** 0.6))
