"""Sweep every F_p-subspace of F_{p^n} and report the Winterhof aggregates.

    python3 scripts/winterhof_sweep.py --p 2 --max-n 10
"""

import argparse
import time

from bilex.field_fpn import ExtFieldDesc, find_irreducible, format_poly
from bilex.subspaces import winterhof_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--max-n", type=int, default=8)
    args = ap.parse_args()
    for n in range(1, args.max_n + 1):
        fld = ExtFieldDesc(args.p, n, find_irreducible(args.p, n))
        t0 = time.perf_counter()
        s = winterhof_sweep(fld)
        print(f"F_{args.p}^{n:<2} f={format_poly(fld.reduction_poly):<24} subspaces={s.subspaces:>11} "
              f"max={max(s.max_aggregate_by_dim):>6} cap={s.cap:>6} "
              f"all_equal={s.always_equal}  {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
