"""Regenerate the two bundled data files under src/zetamax/_data/.

Run from the repository root:

    python3 demos/regenerate_data.py

1. ``stieltjes.txt`` -- the Stieltjes constants gamma_0 .. gamma_40 to 50
   digits, computed by mpmath at 70 working digits.  The library's own
   Euler-Maclaurin backend (``zetamax.series.stieltjes_computed``) serves as
   an independent cross-check of this table in the test suite.

2. ``rs_correction.npz`` -- degree-64 Chebyshev fits (on p in [0, 1], mapped
   to x = 2p - 1) of the first four Riemann-Siegel correction terms

       C0 = Psi
       C1 = -Psi'''/(96 pi^2)
       C2 = Psi''/(64 pi^2) + Psi^(6)/(18432 pi^4)
       C3 = -Psi'/(64 pi^2) - Psi^(5)/(3840 pi^4) - Psi^(9)/(5308416 pi^6)

   where Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p).  Derivatives are
   taken from 50-digit Taylor coefficients (Cauchy-integral method) at 96
   Chebyshev nodes; fit residuals come out below 2e-15.

Both outputs are deterministic, so a rerun leaves the repository unchanged
apart from float round-off at the last bit (in practice: byte-identical).
"""

import os

import mpmath as mp
import numpy as np
import numpy.polynomial.chebyshev as ch

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "zetamax", "_data")


def write_stieltjes(path):
    with mp.workdps(70):
        lines = ["# Stieltjes constants gamma_j, 50 digits, j = 0..40\n"]
        for j in range(41):
            lines.append("%d\t%s\n" % (j, mp.nstr(mp.stieltjes(j), 50)))
    with open(path, "w", encoding="ascii") as fh:
        fh.writelines(lines)
    print("wrote %s (41 constants)" % path)


def write_rs_corrections(path):
    mp.mp.dps = 50

    def Psi(z):
        return mp.cos(2 * mp.pi * (z * z - z - mp.mpf(1) / 16)) / mp.cos(2 * mp.pi * z)

    M = 96
    k = np.arange(M)
    x = np.cos((2 * k + 1) * np.pi / (2 * M))      # Chebyshev nodes in [-1, 1]
    p_nodes = (x + 1) / 2

    orders = 10
    deriv = {r: [] for r in range(orders)}
    for p in p_nodes:
        tay = mp.taylor(Psi, mp.mpf(float(p)), orders - 1, method="quad", radius=0.4)
        for r in range(orders):
            deriv[r].append(tay[r] * mp.factorial(r))
    D = {r: np.array([float(v) for v in deriv[r]]) for r in range(orders)}

    pi2 = np.pi ** 2
    curves = {
        "C0": D[0],
        "C1": -D[3] / (96 * pi2),
        "C2": D[2] / (64 * pi2) + D[6] / (18432 * pi2 ** 2),
        "C3": -D[1] / (64 * pi2) - D[5] / (3840 * pi2 ** 2)
              - D[9] / (5308416 * pi2 ** 3),
    }

    coeffs = {}
    for name, y in curves.items():
        c = ch.chebfit(x, y, 64)
        coeffs[name] = c
        resid = np.max(np.abs(ch.chebval(x, c) - y))
        print("  %s: fit residual %.2e (max |value| %.3f)"
              % (name, resid, np.abs(y).max()))
        assert resid < 1e-13
    np.savez(path, **coeffs)
    print("wrote %s" % path)


def spot_check():
    """Compare the freshly generated tables against independent references."""
    from zetamax.hardy import z_eval
    from zetamax.series import stieltjes, stieltjes_computed

    with mp.workdps(40):
        for j in (0, 1, 5):
            diff = abs(stieltjes(j, digits=40) - stieltjes_computed(j, digits=40))
            print("  gamma_%d table-vs-computed diff: %s" % (j, mp.nstr(diff, 3)))

    for t in (30.0, 100.0, 1000.0):
        err = abs(z_eval(t) - float(mp.siegelz(t)))
        print("  |Z(%g) - siegelz| = %.2e" % (t, err))


if __name__ == "__main__":
    write_stieltjes(os.path.join(DATA_DIR, "stieltjes.txt"))
    write_rs_corrections(os.path.join(DATA_DIR, "rs_correction.npz"))
    print("spot checks:")
    spot_check()
