"""Build a separating tube for a random 3D bipartite instance and export it."""
import argparse

from sepcycle import poly3d
from sepcycle.hypergraph import bipartition
from sepcycle.instances_io import gen_bipartite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="tube.stl")
    args = ap.parse_args()
    inst = gen_bipartite(args.n, 2 * args.n, args.seed, dim=3)
    col = bipartition(inst.hypergraph)
    tube = poly3d.construct_3d(inst, col).tube
    rep = poly3d.validate_polyhedron(tube, inst, col.colors)
    a = rep.audit
    print(f"vertices={len(tube.vertices)} faces={len(tube.faces)} delta={tube.delta:.3g}")
    print(f"euler={a.euler} watertight={a.watertight} volume={a.volume:.3g} perimeter={tube.perimeter:.4g}")
    print(f"separation passed={rep.passed} validators agree={rep.agree}")
    text = poly3d.to_stl(tube) if args.out.endswith(".stl") else poly3d.to_off(tube)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print("wrote", args.out)


if __name__ == "__main__":
    main()
