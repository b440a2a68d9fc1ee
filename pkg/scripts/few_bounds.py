"""Worst observed Few path length against sqrt(2n) + 7/4 (2D) and 3 n^(2/3) + 6 (3D)."""
import argparse
import math

import numpy as np

from sepcycle import approx


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 100, 1000, 10000])
    args = ap.parse_args()
    print("dim,n,worst_length,bound,worst_ratio")
    for n in args.sizes:
        lens = [approx.few_path_2d(np.random.default_rng(s).random((n, 2)), (0, 0, 1, 1)).length for s in range(args.seeds)]
        b = math.sqrt(2 * n) + 1.75
        print(f"2,{n},{max(lens):.6g},{b:.6g},{max(lens) / b:.4f}")
    for n in args.sizes:
        lens = [approx.few_path_3d(np.random.default_rng(s).random((n, 3)), (0, 0, 0, 1, 1, 1)).length for s in range(args.seeds)]
        b = 3 * n ** (2 / 3) + 6
        print(f"3,{n},{max(lens):.6g},{b:.6g},{max(lens) / b:.4f}")


if __name__ == "__main__":
    main()
