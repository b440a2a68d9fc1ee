"""Few's boustrophedon paths and the diameter-guessing O(sqrt n) approximation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import networkx as nx
import numpy as np

from . import geom
from .cycle2d import Construction, SimpleCycle, construct, minimum_spanning_tree
from .errors import DegenerateGeometry, NoCandidate, TooLarge
from .hypergraph import BLUE, RED, Coloring, bipartition
from .instances_io import GeomInstance

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True, eq=False)
class FewPath:
    order: np.ndarray  # indices into the input points
    points: np.ndarray
    strips: int
    length: float


@dataclass(frozen=True)
class GuessRectangle:
    a: tuple
    b: tuple
    rotation: float

    @property
    def size(self) -> float:
        return math.dist(self.a, self.b)

    @property
    def center(self) -> np.ndarray:
        return (np.asarray(self.a) + np.asarray(self.b)) / 2

    def contains(self, points, tol: float = 0.0) -> np.ndarray:
        """Closed containment in the |ab| x sqrt(3)|ab| rectangle aligned with ab."""
        P = np.asarray(points, dtype=float).reshape(-1, 2) - self.center
        u = np.array([math.cos(self.rotation), math.sin(self.rotation)])
        v = np.array([-u[1], u[0]])
        L = self.size
        return (np.abs(P @ u) <= L / 2 + tol) & (np.abs(P @ v) <= SQRT3 * L / 2 + tol)

    def corners(self) -> np.ndarray:
        u = np.array([math.cos(self.rotation), math.sin(self.rotation)])
        v = np.array([-u[1], u[0]])
        L = self.size
        c = self.center
        return np.array([c + sx * L / 2 * u + sy * SQRT3 * L / 2 * v for sx, sy in ((-1, -1), (1, -1), (1, 1), (-1, 1))])


def guess_rectangle(a, b) -> GuessRectangle:
    a = tuple(float(x) for x in a)
    b = tuple(float(x) for x in b)
    return GuessRectangle(a, b, math.atan2(b[1] - a[1], b[0] - a[0]))


def few_bound(n: int, width: float = 1.0, height: float = 1.0) -> float:
    return math.sqrt(2 * n * width * height) + 2 * (width + height)


def snake_order(points, strips: int, lo: float, height: float, along: int = 0, across: int = 1) -> np.ndarray:
    """Boustrophedon order over horizontal strips; boundary points go to the lower strip."""
    P = np.asarray(points, dtype=float)
    h = height / strips
    idx = np.ceil((P[:, across] - lo) / h) - 1 if h > 0 else np.zeros(len(P))
    idx = np.clip(idx, 0, strips - 1).astype(int)
    x = P[:, along]
    key_x = np.where(idx % 2 == 0, x, -x)
    return np.lexsort((P[:, across], key_x, idx))


def few_path_2d(points, rect=None) -> FewPath:
    """Shortest boustrophedon path over the candidate strip counts.

    ``rect`` is (xmin, ymin, xmax, ymax); defaults to the bounding box.
    """
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(P)
    if n == 0:
        return FewPath(np.zeros(0, dtype=int), P, 0, 0.0)
    if rect is None:
        rect = (*P.min(axis=0), *P.max(axis=0))
    x0, y0, x1, y1 = rect
    W, H = max(x1 - x0, 0.0), max(y1 - y0, 0.0)
    top = max(1, min(n, 2 * math.ceil(math.sqrt(n * H / W)) + 2 if W > 0 else 1))
    best = None
    for s in range(1, top + 1):
        order = snake_order(P, s, y0, H)
        length = geom.polygon_length(P[order], closed=False)
        if best is None or length < best[1]:
            best = (order, length, s)
    order, length, s = best
    return FewPath(order, P[order], s, length)


def few_path_3d(points, box=None) -> FewPath:
    """ceil(n^(1/3)) slabs along x; each slab is snaked in (y, z); slabs are chained."""
    P = np.asarray(points, dtype=float).reshape(-1, 3)
    n = len(P)
    if n == 0:
        return FewPath(np.zeros(0, dtype=int), P, 0, 0.0)
    if box is None:
        box = (*P.min(axis=0), *P.max(axis=0))
    x0, y0, z0, x1, y1, z1 = box
    slabs = max(1, math.ceil(round(n ** (1 / 3), 9)))
    t = (x1 - x0) / slabs
    sid = np.clip(np.ceil((P[:, 0] - x0) / t) - 1 if t > 0 else np.zeros(n), 0, slabs - 1).astype(int)
    order = []
    for k in range(slabs):
        members = np.flatnonzero(sid == k)
        if len(members) == 0:
            continue
        sub = P[members][:, 1:]
        path = few_path_2d(sub, (y0, z0, y1, z1)) if len(members) > 1 else None
        local = members[path.order] if path is not None else members
        if order and len(local) > 1:
            # start the slab at whichever end is nearer to where the last one stopped
            last = P[order[-1]]
            if np.linalg.norm(P[local[-1]] - last) < np.linalg.norm(P[local[0]] - last):
                local = local[::-1]
        order.extend(int(i) for i in local)
    order = np.array(order, dtype=int)
    return FewPath(order, P[order], slabs, geom.polygon_length(P[order], closed=False))


# ------------------------------------------------------------ lower bounds


def _selection_points(instance: GeomInstance, masks: np.ndarray) -> np.ndarray:
    E = np.asarray(instance.edges)
    n = len(E)
    bits = (masks[:, None] >> np.arange(n)[None, :]) & 1
    idx = np.where(bits == 0, E[None, :, 0], E[None, :, 1])
    return idx


def min_diam_selection(instance: GeomInstance, limit: int = 14) -> tuple[tuple[int, ...], float]:
    """Brute force over one-point-per-pair selections of a matching.

    Returns the first selection (binary-counter order) of minimum diameter and
    the length lower bound 2 * diameter.
    """
    if not instance.is_matching:
        raise ValueError("min_diam_selection expects a matching")
    n = len(instance.edges)
    if n > limit:
        raise TooLarge(f"{n} pairs exceed the brute-force limit {limit}")
    masks = np.arange(1 << n, dtype=np.int64)
    idx = _selection_points(instance, masks)
    P = instance.points[idx]
    diam = np.zeros(len(masks))
    for i in range(n):
        for j in range(i + 1, n):
            diam = np.maximum(diam, np.linalg.norm(P[:, i] - P[:, j], axis=1))
    k = int(np.argmin(diam))
    return tuple(int(v) for v in idx[k]), 2.0 * float(diam[k])


def _two_sat(n_vars: int, clauses) -> bool:
    # literal 2*v is x_v, 2*v+1 is not x_v
    g = nx.DiGraph()
    g.add_nodes_from(range(2 * n_vars))
    for a, b in clauses:
        g.add_edge(a ^ 1, b)
        g.add_edge(b ^ 1, a)
    comp = {}
    for k, scc in enumerate(nx.strongly_connected_components(g)):
        for lit in scc:
            comp[lit] = k
    return all(comp[2 * v] != comp[2 * v + 1] for v in range(n_vars))


def min_diam_two_sat(instance: GeomInstance) -> float:
    """Exact minimum selection diameter via 2-SAT over sorted distance thresholds.

    Returns the lower bound 2 * diameter; polynomial, so usable where the
    brute force is not.
    """
    E = np.asarray(instance.edges)
    n = len(E)
    if n <= 1:
        return 0.0
    P = instance.points
    # literal choosing point p of pair k: p == E[k,0] -> not x_k, else x_k
    lit = {}
    for k, (p, q) in enumerate(E):
        lit[int(p)] = 2 * k + 1
        lit[int(q)] = 2 * k
    verts = E.reshape(-1)
    D = np.linalg.norm(P[verts][:, None] - P[verts][None, :], axis=-1)
    pair_of = np.repeat(np.arange(n), 2)
    cand = np.unique(D[pair_of[:, None] != pair_of[None, :]])

    def feasible(limit):
        clauses = []
        ii, jj = np.nonzero((D > limit) & (pair_of[:, None] < pair_of[None, :]))
        for i, j in zip(ii, jj):
            clauses.append((lit[int(verts[i])] ^ 1, lit[int(verts[j])] ^ 1))
        return _two_sat(n, clauses)

    lo, hi = 0, len(cand) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(cand[mid]):
            hi = mid
        else:
            lo = mid + 1
    return 2.0 * float(cand[lo])


# --------------------------------------------------------- the approximation


@dataclass
class SqrtApproxResult:
    cycle: SimpleCycle
    construction: Construction
    pair: tuple[int, int]
    candidate_index: int
    candidates: int
    abandoned: int
    mst_length: float
    few_length: float


def component_info(instance: GeomInstance, coloring: Coloring):
    comp = np.asarray(coloring.component)
    has_edge = np.zeros(comp.max() + 1, dtype=bool)
    for e in instance.edges:
        has_edge[comp[e[0]]] = True
    return comp, has_edge


def classify_candidate(instance: GeomInstance, coloring: Coloring, i: int, j: int, tol: float = 0.0):
    """Recolor components for the guessed diameter pair (i, j).

    Returns the adjusted colors, or None when some component has neither
    color class inside the guess rectangle. Edgeless vertices become blue.
    """
    P = instance.points
    rect = guess_rectangle(P[i], P[j])
    inside = rect.contains(P, tol)
    comp, has_edge = component_info(instance, coloring)
    red = np.array([c == RED for c in coloring.colors])
    k = len(has_edge)
    red_out = np.bincount(comp, weights=(red & ~inside), minlength=k) > 0
    blue_out = np.bincount(comp, weights=(~red & ~inside), minlength=k) > 0
    flip = red_out & ~blue_out
    if np.any(has_edge & red_out & blue_out):
        return None
    new_red = np.where(flip[comp], ~red, red) & has_edge[comp]
    return tuple(RED if r else BLUE for r in new_red)


def sqrt_approx_detailed(instance: GeomInstance, rel_tol: float = geom.REL_TOL) -> SqrtApproxResult:
    if instance.dim != 2 or not instance.is_graph:
        raise ValueError("sqrt_approx expects a planar graph instance")
    base = bipartition(instance.hypergraph)
    P = instance.points
    tol = geom.default_tolerance(P, rel_tol)
    cache: dict = {}
    best = None
    cand = abandoned = 0
    n = instance.n
    for i in range(n):
        for j in range(i + 1, n):
            idx = cand
            cand += 1
            colors = classify_candidate(instance, base, i, j, tol)
            if colors is None:
                abandoned += 1
                continue
            if colors in cache:
                continue
            try:
                c = construct(instance, Coloring(colors, base.component, base.flipped), rel_tol=rel_tol)
            except DegenerateGeometry:
                cache[colors] = None
                continue
            cache[colors] = c
            if best is None or c.cycle.length < best[0]:
                best = (c.cycle.length, idx, (i, j), c)
    if best is None:
        raise NoCandidate("every diameter guess was abandoned")
    _, idx, pair, c = best
    reds = P[[k for k, col in enumerate(c.coloring.colors) if col == RED]]
    rect = guess_rectangle(P[pair[0]], P[pair[1]])
    # Few's path in the rectangle frame bounds the MST from above
    u = np.array([math.cos(rect.rotation), math.sin(rect.rotation)])
    v = np.array([-u[1], u[0]])
    local = (reds - rect.center) @ np.stack([u, v], axis=1)
    L = rect.size
    few = few_path_2d(local, (-L / 2, -SQRT3 * L / 2, L / 2, SQRT3 * L / 2))
    return SqrtApproxResult(c.cycle, c, pair, idx, cand, abandoned, c.tree.length, few.length)


def sqrt_approx(instance: GeomInstance, **kw) -> SimpleCycle:
    return sqrt_approx_detailed(instance, **kw).cycle
