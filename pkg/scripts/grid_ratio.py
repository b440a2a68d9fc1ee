"""Length of the sqrt(n) approximation on hard grids, against the exact minimum-diameter bound."""
import argparse
import math

import numpy as np

from sepcycle import approx
from sepcycle.instances_io import gen_grid_hard


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=6)
    args = ap.parse_args()
    ns, ratios = [], []
    print("k,n,length,lower_bound,ratio,ratio_over_sqrt_n")
    for k in range(2, args.kmax + 1):
        inst = gen_grid_hard(k)
        length = approx.sqrt_approx(inst).length
        lb = approx.min_diam_two_sat(inst)
        ns.append(k * k)
        ratios.append(length / lb)
        print(f"{k},{k * k},{length:.6g},{lb:.6g},{length / lb:.4f},{length / lb / math.sqrt(k * k):.4f}")
    print(f"# fitted exponent {np.polyfit(np.log(ns), np.log(ratios), 1)[0]:.3f}")


if __name__ == "__main__":
    main()
