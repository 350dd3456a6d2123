"""Compare the four-fold domination table with witnesses and exact solver values."""

import argparse
import csv
import math
import sys

from domchain import generators as gen
from domchain.constructions import gamma4_closed_form, gamma4_witness
from domchain.solvers import Parameter, solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--solve-limit", type=int, default=150, help="solve exactly when the product has at most this many vertices")
    ap.add_argument("--budget", type=float, default=60.0)
    args = ap.parse_args()

    m = args.max_n
    tuples = [(a, b, c, d) for a in range(2, m + 1) for b in range(max(a, 3), m + 1) for c in range(b, m + 1) for d in range(c, m + 1)]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n1", "n2", "n3", "n4", "vertices", "table", "witness_size", "witness_source", "gamma", "status", "lower", "upper"])
    for ns in tuples:
        table = gamma4_closed_form(*ns)
        wit = gamma4_witness(*ns, budget=args.budget, raise_on_fail=False)
        size = len(wit.points) if wit.verified else ""
        row = list(ns) + [math.prod(ns), table, size, wit.source]
        if math.prod(ns) <= args.solve_limit:
            r = solve(gen.product(gen.ProductSpec.complete(ns)), Parameter.GAMMA, budget=args.budget)
            row += [r.value if r.value is not None else "", r.status, r.lower, r.upper]
        else:
            row += ["", "not run", "", ""]
        w.writerow(row)
        sys.stdout.flush()


if __name__ == "__main__":
    main()
