"""CSV benchmark suites. Every column except ``wall_s`` is deterministic."""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import approx, convex, geom, poly3d
from .hypergraph import bipartition
from .instances_io import gen_bipartite, gen_convex, gen_grid_hard, gen_matching, uniform_cube_points


@dataclass(frozen=True)
class BenchConfig:
    seeds: int = 5
    few_sizes: tuple[int, ...] = (10, 100, 1000)
    subpolygon_eps: tuple[float, ...] = (0.01, 0.04, 0.09)
    ptas_eps: tuple[float, ...] = (0.2, 0.5)
    ptas_max_n: int = 8
    grid_ks: tuple[int, ...] = (2, 3, 4)
    cauchy_samples: int = 1 << 16
    poly3d_max_n: int = 40


def random_hull(seed: int, m_max: int = 500) -> geom.ConvexPolygon:
    """Hull of points on a random ellipse-like curve, so most samples survive."""
    rng = np.random.default_rng(seed)
    m = int(rng.integers(3, m_max + 1))
    ang = np.sort(rng.random(m)) * 2 * math.pi
    a, b = rng.uniform(0.5, 2.0, size=2)
    pts = np.c_[a * np.cos(ang), b * np.sin(ang)]
    return geom.convex_hull(pts)


def _few_bounds(cfg: BenchConfig) -> Iterator[dict]:
    for n in cfg.few_sizes:
        for s in range(cfg.seeds):
            pts = np.random.default_rng(s).random((n, 2))
            t = time.perf_counter()
            f = approx.few_path_2d(pts, (0.0, 0.0, 1.0, 1.0))
            bound = math.sqrt(2 * n) + 1.75
            yield dict(n=n, seed=s, algorithm="few_path_2d", length=f.length, bound=bound,
                       ratio=f.length / bound, ok=f.length <= bound, wall_s=time.perf_counter() - t)


def _subpolygon(cfg: BenchConfig) -> Iterator[dict]:
    for s in range(cfg.seeds):
        P = random_hull(s)
        for eps in cfg.subpolygon_eps:
            t = time.perf_counter()
            Q, trace = convex.approx_subpolygon(P, eps)
            yield dict(m=len(P), seed=s, eps=eps, q=len(Q), bound=convex.size_bound(eps),
                       contained=convex.verify_approx(P, Q, eps), alpha_sum=trace.alpha_sum,
                       wall_s=time.perf_counter() - t)


def _ptas_vs_oracle(cfg: BenchConfig) -> Iterator[dict]:
    for s in range(cfg.seeds):
        n = 1 + s % cfg.ptas_max_n
        inst = gen_convex(n, s)
        opt = convex.oracle_convex(inst).length
        for eps in cfg.ptas_eps:
            t = time.perf_counter()
            got = convex.ptas_a1(inst, eps).length
            ratio = got / opt if opt > 0 else 1.0
            yield dict(n=n, seed=s, eps_internal=eps, oracle=opt, ptas=got, ratio=ratio,
                       bound=1 + 4 * eps, ok=ratio <= 1 + 4 * eps + 1e-12, wall_s=time.perf_counter() - t)


def _sqrt_ratio(cfg: BenchConfig) -> Iterator[dict]:
    for k in cfg.grid_ks:
        inst = gen_grid_hard(k)
        t = time.perf_counter()
        length = approx.sqrt_approx(inst).length
        lb = approx.min_diam_two_sat(inst)
        yield dict(instance=f"grid_hard_{k}", n=k * k, length=length, lower_bound=lb,
                   ratio=length / lb, bound=10 * math.sqrt(k * k), wall_s=time.perf_counter() - t)
    for s in range(cfg.seeds):
        n = 2 + s % 9
        inst = gen_matching(n, s)
        t = time.perf_counter()
        length = approx.sqrt_approx(inst).length
        _, lb = approx.min_diam_selection(inst)
        yield dict(instance=f"matching_{n}_{s}", n=n, length=length, lower_bound=lb,
                   ratio=length / max(lb, 1e-12), bound=10 * math.sqrt(n), wall_s=time.perf_counter() - t)


def _cauchy(cfg: BenchConfig) -> Iterator[dict]:
    for s in range(cfg.seeds):
        P = random_hull(s)
        t = time.perf_counter()
        w = convex.width_integral(P, cfg.cauchy_samples)
        yield dict(m=len(P), seed=s, perimeter=P.perimeter, integral=w,
                   abs_err=abs(w - P.perimeter), rel_err=abs(w - P.perimeter) / P.perimeter,
                   wall_s=time.perf_counter() - t)


def _poly3d(cfg: BenchConfig) -> Iterator[dict]:
    for s in range(cfg.seeds):
        n = 2 + s * 7 % (cfg.poly3d_max_n - 1)
        inst = gen_bipartite(n, 2 * n, s, dim=3)
        t = time.perf_counter()
        col = bipartition(inst.hypergraph)
        c = poly3d.construct_3d(inst, col)
        rep = poly3d.validate_polyhedron(c.tube, inst, col.colors)
        a = rep.audit
        yield dict(n=n, seed=s, skeleton=c.tube.skeleton.length, delta=c.tube.delta,
                   perimeter=c.tube.perimeter, volume=a.volume, euler=a.euler, passed=rep.passed,
                   wall_s=time.perf_counter() - t)


SUITES: dict[str, Callable[[BenchConfig], Iterator[dict]]] = {
    "few-bounds": _few_bounds,
    "lemma4": _subpolygon,
    "ptas-vs-oracle": _ptas_vs_oracle,
    "sqrt-ratio": _sqrt_ratio,
    "cauchy": _cauchy,
    "poly3d": _poly3d,
}


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def run_suite(name: str, cfg: BenchConfig = BenchConfig()) -> str:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rows = list(SUITES[name](cfg))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if rows:
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([_cell(v) for v in r.values()])
    return buf.getvalue()


def strip_wall_time(text: str) -> str:
    """Drop the ``wall_s`` column, for run-to-run comparisons."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        return ""
    keep = [i for i, h in enumerate(rows[0]) if h != "wall_s"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow([r[i] for i in keep])
    return buf.getvalue()
