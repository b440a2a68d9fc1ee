"""Subpolygon sizes on regular polygons: the greedy scan and the smallest valid subset."""
import argparse
import math

import numpy as np

from sepcycle import convex, geom


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=360)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.032, 0.008, 0.002, 0.0005])
    args = ap.parse_args()
    a = np.arange(args.m) * 2 * math.pi / args.m
    P = geom.ConvexPolygon(np.c_[np.cos(a), np.sin(a)])
    print("eps,scan_size,min_size,bound,min_size_times_sqrt_eps")
    for eps in args.eps:
        Q, _ = convex.approx_subpolygon(P, eps)
        k = convex.min_subpolygon_size(P, eps)
        print(f"{eps},{len(Q)},{k},{convex.size_bound(eps)},{k * math.sqrt(eps):.4f}")


if __name__ == "__main__":
    main()
