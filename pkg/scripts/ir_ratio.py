"""Finite-n values of the IR(X_n) / alpha(X_n) upper bound, with exact IR where X_n is small."""

import argparse
import math
from fractions import Fraction

from domchain import generators as gen
from domchain.constructions import alpha_formula, ir_upper_bounds
from domchain.numtheory import is_prime
from domchain.solvers import Parameter, solve


def rough(r, count, width):
    """Products of `width` consecutive primes starting at the first prime >= r."""
    p, out = r, []
    while len(out) < count:
        ps = []
        q = p
        while len(ps) < width:
            if is_prime(q):
                ps.append(q)
            q += 1
        out.append(math.prod(ps))
        p = ps[0] + 1
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="*", default=[6, 10, 12, 15, 18, 20, 21, 28, 30, 105, 1155])
    ap.add_argument("--rough", type=int, default=0, help="also sample r-rough products of primes >= r")
    ap.add_argument("--width", type=int, default=3)
    args = ap.parse_args()

    ns = list(args.n) + (rough(args.rough, 5, args.width) if args.rough else [])
    print(f"{'n':>10} {'alpha':>8} {'bound/alpha':>14} {'float':>8}  IR")
    for n in ns:
        spec = gen.xn_product_spec(n).canonical()
        alpha = alpha_formula(spec)
        cor = next(b for b in ir_upper_bounds(spec, n=n) if b.name.startswith("IR(X_n)"))
        ratio = Fraction(cor.bound_value) / alpha
        ir = ""
        if n <= 30:
            ir = solve(gen.unitary_cayley(n), Parameter.IR_UPPER).value
        print(f"{n:>10} {str(alpha):>8} {str(ratio):>14} {float(ratio):8.4f}  {ir}")


if __name__ == "__main__":
    main()
