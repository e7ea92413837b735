#!/usr/bin/env python3
"""Scan the base sequence's coefficient denominators against two scalings.

For each n the scan reports the denominator lcm of w[n], whether it equals
n!, and what remains after scaling by lcm(1..n) and by n!.  The outcome over
any range n >= 4: the denominator of w[n] is exactly n!, so the n! scaling
always clears it while the lcm(1..n) scaling stops working at n = 4 (12 does
not cover 4! = 24 two-adically).
"""

import argparse

from recint.multipoly import denom_profile
from recint.scalars import factorial, lcm_upto
from recint.sequences import gen_w


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=24, help="largest index to scan")
    args = ap.parse_args()

    w = gen_w(args.n)
    print(f"{'n':>3}  {'denom(w_n)':>26}  {'= n!':>4}  {'after lcm(1..n)':>16}  {'after n!':>8}")
    first_fail = None
    for n, term in enumerate(w.terms):
        denom = denom_profile(term).lcm_denominator
        lcm_left = denom_profile(term * lcm_upto(n)).lcm_denominator
        fact_left = denom_profile(term * factorial(n)).lcm_denominator
        if lcm_left != 1 and first_fail is None:
            first_fail = n
        print(f"{n:>3}  {denom:>26}  {str(denom == factorial(n)):>4}  {lcm_left:>16}  {fact_left:>8}")

    if first_fail is None:
        print("\nlcm(1..n) cleared every denominator in range.")
    else:
        print(f"\nlcm(1..n) scaling first fails at n = {first_fail}; n! clears every term.")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
