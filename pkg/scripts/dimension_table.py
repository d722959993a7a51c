"""Exact dimensions of the curvature symmetry classes and Szabó map kernels.

    python scripts/dimension_table.py --max-m 5
"""

import argparse
import time

from szabo.nullcone import linear_annihilator_space_dim
from szabo.pseudo import PseudoSpace
from szabo.tensors import acdt_dimension, act_dimension, szabo_map_kernel_dim


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-m", type=int, default=5)
    args = ap.parse_args()
    print(f"{'m':>2} {'act':>5} {'m^2(m^2-1)/12':>14} {'acdt':>6} {'m^2(m^2-1)(m+2)/24':>19}")
    for m in range(1, min(args.max_m, 6) + 1):
        print(f"{m:>2} {act_dimension(m):>5} {m*m*(m*m-1)//12:>14} {acdt_dimension(m):>6} "
              f"{m*m*(m*m-1)*(m+2)//24:>19}")
    print()
    print(f"{'(p,q)':>6} {'szabo kernel':>13} {'annihilators':>13} {'sec':>6}")
    for m in range(1, min(args.max_m, 5) + 1):
        for p in range(m + 1):
            sp = PseudoSpace.of(p, m - p)
            t = time.perf_counter()
            k = szabo_map_kernel_dim(sp)
            a = linear_annihilator_space_dim(sp)
            print(f"{str(sp.signature):>6} {k:>13} {a:>13} {time.perf_counter() - t:6.2f}")


if __name__ == "__main__":
    main()
