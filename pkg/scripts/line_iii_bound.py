"""Table line iii over GF(p^d): sweep Lambda sizes and record k against p^d + 1.

For each (p, d) every Lambda = {0, inf} u S with S an initial segment of the
nonzero field elements is built, classified, and its k and kernel data
printed.  The bound k <= p^d + 1 is attained exactly at Lambda = everything.

    python scripts/line_iii_bound.py --pd 2,1 3,1 2,2 5,1
"""

import argparse
import time

from pregeom.classify import classify_normal_basic
from pregeom.gen import example_gamma_lambda


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pd", nargs="+", default=["2,1", "3,1", "2,2", "5,1"])
    args = ap.parse_args()
    print(f"{'p':>2} {'d':>2} {'|Lam|':>5} {'line':<9} {'k':>3} {'m':>3} {'|G|':>6} {'bound':>5}  sec")
    for item in args.pd:
        p, d = map(int, item.split(","))
        q = p ** d
        for extra in range(1, q):
            lam = ",".join(["0", "inf"] + [str(x) for x in range(1, extra + 1)])
            t0 = time.perf_counter()
            a = example_gamma_lambda(p, d, lam)
            res = classify_normal_basic(a)
            t = res.table1
            k = t.params["k"]
            assert k <= q + 1
            mark = "=" if k == q + 1 else "<"
            print(f"{p:>2} {d:>2} {extra + 2:>5} {t.line:<9} {k:>3} {t.params['m']:>3} "
                  f"{a.group.order():>6} {mark}{q + 1:>4}  {time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    main()
