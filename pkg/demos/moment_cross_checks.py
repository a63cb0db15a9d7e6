"""Cross-check the machinery against classical second-moment asymptotics.

Two independent sanity anchors for the whole pipeline (Z evaluation,
zero-aligned quadrature, and the phase derivative chi'/chi):

  * the plain second moment
        int_1^T Z(t)^2 dt  ~  T log(T/2pi) + (2 gamma_0 - 1) T,
  * the moment twisted by the phase density
        -(1/2pi) int_1^T Re[chi'/chi(1/2+it)] Z(t)^2 dt
            ~  (T/2pi) (L^2 + (2 gamma_0 - 2) L + 2 - 2 gamma_0),
    with L = log(T/2pi).

Both remainders are expected to be O(T^(3/4)); the script prints the
observed differences at several heights and the decreasing relative error
diff/T, which is the behaviour the test suite pins down with calibrated
T^0.6 envelopes.

Run:  python3 demos/moment_cross_checks.py        (a few minutes at T = 2e4)
"""

from zetamax.experiment import ingham_check, twisted_check

if __name__ == "__main__":
    for name, check in (("plain second moment", ingham_check),
                        ("twisted second moment", twisted_check)):
        print(name)
        print("  %8s  %14s  %14s  %10s  %10s" % ("T", "quadrature", "asymptotic", "diff", "diff/T"))
        for T in (500.0, 1000.0, 5000.0, 20000.0):
            lhs, rhs, diff = check(T)
            print("  %8.0f  %14.3f  %14.3f  %10.3f  %10.2e"
                  % (T, lhs, rhs, diff, diff / T))
        print()
