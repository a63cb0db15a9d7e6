"""A small end-to-end run of the local-maxima experiment.

Pipeline: locate the zeros of the Hardy Z-function up to height 5000, find
the maximum of Z^2 in each consecutive-zero gap, accumulate the maxima with
compensated summation, and compare the cumulative sum against the truncated
asymptotic expansion for several truncation indices N.

Even at this modest height (about 4500 zeros) the characteristic shape of
the error table is visible: the error magnitude falls steeply as N grows
from -2, then flattens into a plateau once the optimal truncation index
(about 0.186 log T) is passed -- the expansion is asymptotic, not
convergent, so pushing N further buys nothing.

Run:  python3 demos/maxima_experiment.py        (about half a minute)
"""

import math

from zetamax.coefficients import build_alpha_set, build_c_table
from zetamax.experiment import cumulative, error_table
from zetamax.hardy import find_extrema, find_zeros

T = 5000.0

if __name__ == "__main__":
    print("scanning for zeros up to t = %g ..." % T)
    zeros = find_zeros(14.0, T)
    print("  %d zeros found (first %.4f, last %.4f)"
          % (len(zeros), zeros.ordinates[0], zeros.ordinates[-1]))

    print("locating the maximum of Z^2 in each gap ...")
    records = find_extrema(zeros, workers=4)
    flagged = sum(r.flagged for r in records)
    print("  %d records, %d flagged" % (len(records), flagged))

    series = cumulative(records)
    print("cumulative sum of maxima: %.6f" % series.total)

    alphas = build_alpha_set(build_c_table(60, 16), 12)
    table = error_table(series, alphas, range(-2, 11))
    predicted = 0.186 * math.log(table.T_ref)
    print("\nT_ref = %.4f, optimal truncation near N = %.2f" % (table.T_ref, predicted))
    print("  N   error (asymptotic - true)")
    for N, err in table.rows:
        print("  %3d   %12.4f" % (N, err))
