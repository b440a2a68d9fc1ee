"""Command-line entry point: check, solve, bench, generate, render.

Exit codes: 0 feasible / success, 1 infeasible, 2 usage, parse or size-guard error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from . import approx, bench, convex, geom, instances_io, poly3d, render
from .cycle2d import construct, feasible_coloring
from .errors import Infeasible, SepCycleError, TooLarge
from .hypergraph import RED, bipartition, two_color_exact

EXIT_OK, EXIT_INFEASIBLE, EXIT_ERROR = 0, 1, 2
DEFAULT_SIZE_GUARD = 24


@dataclass
class RunReport:
    command: str
    name: str
    n: int
    status: str
    length: Optional[float] = None
    lower_bound: Optional[float] = None
    ratio: Optional[float] = None
    wall_s: Optional[float] = None
    seed: Optional[int] = None
    rel_tol: Optional[float] = None
    mode: Optional[str] = None
    eps: Optional[float] = None
    solution: Optional[str] = None
    witness: Optional[str] = None

    def fields(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            if v is None or (isinstance(v, float) and not math.isfinite(v)):
                continue
            out[k] = v
        return out

    def render(self, as_json: bool) -> str:
        f = self.fields()
        if as_json:
            return json.dumps(f, sort_keys=True)
        return "\n".join(f"{k}={_fmt(v)}" for k, v in f.items())


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def _emit(report: RunReport, args) -> None:
    print(report.render(getattr(args, "json", False)))


def _load(args):
    return instances_io.load_instance(args.instance)


def cmd_check(args) -> int:
    inst = _load(args)
    report = RunReport("check", inst.metadata.get("name", Path(args.instance).stem), inst.n, "FEASIBLE")
    t = time.perf_counter()
    try:
        if inst.is_graph:
            col = bipartition(inst.hypergraph)
        else:
            if inst.n > args.size_guard:
                raise TooLarge(f"size guard: {inst.n} vertices exceed {args.size_guard} (use --size-guard)")
            col = two_color_exact(inst.hypergraph)
            if col is None:
                raise Infeasible("hypergraph is not 2-colorable")
        report.witness = "".join(col.colors)
        code = EXIT_OK
    except Infeasible as exc:
        report.status = "INFEASIBLE"
        report.witness = " ".join(map(str, exc.witness)) if exc.witness else str(exc)
        code = EXIT_INFEASIBLE
    report.wall_s = time.perf_counter() - t
    _emit(report, args)
    return code


def _solution_path(args, suffix: str) -> Path:
    if args.out:
        return Path(args.out)
    p = Path(args.instance)
    return p.with_name(f"{p.stem}.{args.mode}{suffix}")


def _write_cycle(path: Path, vertices, length: float, extra: dict) -> None:
    doc = {"length": length, "vertices": [[float(c) for c in v] for v in vertices], **extra}
    path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def cmd_solve(args) -> int:
    inst = _load(args)
    mode = args.mode
    report = RunReport("solve", inst.metadata.get("name", Path(args.instance).stem), inst.n, "FEASIBLE",
                       seed=args.seed, rel_tol=args.tolerance, mode=mode)
    t = time.perf_counter()
    rel = args.tolerance
    cycle = tube = colors = None
    try:
        if mode == "poly3d":
            if inst.dim != 3:
                raise ValueError("mode poly3d needs a 3D instance")
            if inst.is_matching and inst.n <= 2 * args.size_guard:
                res = poly3d.sqrt_approx_3d_detailed(inst, rel_tol=rel)
                tube, colors = res.tube, res.coloring.colors
            else:
                col = feasible_coloring(inst, args.size_guard)
                tube, colors = poly3d.construct_3d(inst, col, rel_tol=rel).tube, col.colors
            report.length = tube.perimeter
            if inst.is_matching and len(inst.edges) <= 12:
                report.lower_bound = approx.min_diam_selection(inst)[1]
        else:
            if inst.dim != 2:
                raise ValueError(f"mode {mode} needs a 2D instance")
            if mode == "construct":
                col = feasible_coloring(inst, args.size_guard)
                cycle, colors = construct(inst, col, rel_tol=rel).cycle, col.colors
            elif mode == "sqrt":
                res = approx.sqrt_approx_detailed(inst, rel_tol=rel)
                cycle, colors = res.cycle, res.construction.coloring.colors
                if inst.is_matching:
                    if len(inst.edges) <= 14:
                        report.lower_bound = approx.min_diam_selection(inst)[1]
                    else:
                        report.lower_bound = approx.min_diam_two_sat(inst)
            elif mode in ("ptas", "oracle"):
                if mode == "oracle":
                    tour = convex.oracle_convex(inst)
                else:
                    report.eps = args.eps
                    tour = convex.ptas(inst, args.eps, rel_tol=rel)
                    if len(inst.edges) <= 12:
                        report.lower_bound = convex.oracle_convex(inst).length
                cycle = tour.cycle
                sel = set(tour.selection)
                colors = tuple(RED if i in sel else "B" for i in range(inst.n))
            report.length = cycle.length
    except Infeasible as exc:
        report.status = "INFEASIBLE"
        report.witness = " ".join(map(str, exc.witness)) if exc.witness else str(exc)
        report.wall_s = time.perf_counter() - t
        _emit(report, args)
        return EXIT_INFEASIBLE
    report.wall_s = time.perf_counter() - t
    if report.lower_bound is not None and report.length is not None:
        lb = report.lower_bound
        report.ratio = report.length / lb if lb > 0 else (1.0 if report.length == 0 else None)
    if tube is not None:
        path = _solution_path(args, ".off")
        path.write_text(poly3d.to_off(tube), encoding="utf-8")
    else:
        path = _solution_path(args, ".solution.json")
        _write_cycle(path, cycle.vertices, cycle.length, {"mode": mode})
    report.solution = str(path)
    if args.render:
        render.write_svg(args.render, inst, colors, cycle=cycle, polyhedron=tube)
    _emit(report, args)
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = bench.BenchConfig(seeds=args.seeds)
    text = bench.run_suite(args.suite, cfg)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


GENERATORS = {
    "grid-hard": lambda a: instances_io.gen_grid_hard(a.k),
    "convex": lambda a: instances_io.gen_convex(a.n, a.seed),
    "matching": lambda a: instances_io.gen_matching(a.n, a.seed, a.dim),
    "bipartite": lambda a: instances_io.gen_bipartite(a.n, a.m or 2 * a.n, a.seed, a.dim),
    "hypergraph": lambda a: instances_io.gen_random_hypergraph(a.n, a.m or a.n, a.seed),
    "odd-cycle": lambda a: instances_io.gen_odd_cycle(a.n if a.n % 2 else a.n + 1),
    "escape-square": lambda a: instances_io.gen_escape_square(),
    "fig17": lambda a: instances_io.gen_fig17(),
}


def cmd_generate(args) -> int:
    inst = GENERATORS[args.kind](args)
    text = instances_io.serialize_instance(inst)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_render(args) -> int:
    inst = _load(args)
    render.write_svg(args.out, inst)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sepcycle", description="Separating cycles and polyhedra for geometric hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="print the report as one JSON object")
        sp.add_argument("--size-guard", type=int, default=DEFAULT_SIZE_GUARD,
                        help="largest hypergraph handed to the exact 2-coloring search (default 24)")

    c = sub.add_parser("check", help="decide feasibility (2-colorability)")
    c.add_argument("instance")
    common(c)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("solve", help="compute a separating cycle or polyhedron")
    s.add_argument("instance")
    s.add_argument("--mode", choices=["construct", "sqrt", "ptas", "oracle", "poly3d"], default="construct")
    s.add_argument("--eps", type=float, default=0.5,
                   help="target ratio 1+eps for ptas; the enumeration internally runs with eps/4")
    s.add_argument("--seed", type=int, default=0, help="recorded in the report; solvers are deterministic")
    s.add_argument("--tolerance", type=float, default=geom.REL_TOL,
                   help="relative tolerance, scaled by the instance diameter")
    s.add_argument("--render", metavar="OUT.svg", help="also write an SVG drawing")
    s.add_argument("--out", help="solution path (default: next to the input)")
    common(s)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run a CSV benchmark suite")
    b.add_argument("suite")
    b.add_argument("--seeds", type=int, default=5)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("generate", help="write a generated instance")
    g.add_argument("kind", choices=sorted(GENERATORS))
    g.add_argument("--n", type=int, default=8)
    g.add_argument("--m", type=int, default=0)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("render", help="draw an instance as SVG")
    r.add_argument("instance")
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench" and args.suite not in bench.SUITES:
        print(f"error: unknown suite {args.suite!r}; choose from {', '.join(bench.SUITES)}", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (SepCycleError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
