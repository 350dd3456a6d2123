"""Tabulate g(n), gamma_t(X_n), gamma_c(X_n) and the M_{t,j} / M_{c,j} flags for a range of n."""

import argparse
import csv
import sys

from domchain.errors import FeasibilityExceeded
from domchain.solvers import classify_xn


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--start", type=int, default=2)
    ap.add_argument("--stop", type=int, default=60)
    ap.add_argument("--budget", type=float, default=30.0, help="seconds per parameter")
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "g", "gamma_t", "gamma_c", "g_minus_gamma_t", "g_minus_gamma_c", "Mt1", "Mt2", "Mc1", "Mc2"])
    for n in range(args.start, args.stop + 1):
        try:
            c = classify_xn(n, budget=args.budget)
        except FeasibilityExceeded as e:
            print(f"# n={n}: {e}", file=sys.stderr)
            continue
        d_t = c.g - c.gamma_t if c.gamma_t is not None else ""
        d_c = c.g - c.gamma_c if c.gamma_c is not None else ""
        w.writerow([n, c.g, c.gamma_t, c.gamma_c, d_t, d_c, int(c.in_Mt[1]), int(c.in_Mt[2]), int(c.in_Mc[1]), int(c.in_Mc[2])])
        sys.stdout.flush()


if __name__ == "__main__":
    main()
