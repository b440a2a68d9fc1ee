"""Zero-area separating cycles in the plane.

Pipeline: spanning tree of the red points -> bend tree edges that pass
through blue points -> trace the offset contour of the doubled tree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import geom
from .errors import DegenerateGeometry, Infeasible, InfeasibleColoring, TooLarge
from .hypergraph import BLUE, RED, Coloring, bipartition, monochromatic_edges, two_color_exact
from .instances_io import GeomInstance

INF = math.inf
# contour and detours stay within OFFSET_FRACTION of the nearest obstacle
OFFSET_FRACTION = 1.0 / 8.0
MAX_HALVINGS = 8


@dataclass(frozen=True, eq=False)
class PlaneTree:
    """Non-crossing tree; vertices past ``n_base`` are bend apexes of detoured edges."""

    vertices: np.ndarray
    edges: tuple[tuple[int, int], ...]
    n_base: int = -1

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float).reshape(-1, 2)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        if self.n_base < 0:
            object.__setattr__(self, "n_base", len(v))

    @property
    def length(self) -> float:
        if not self.edges:
            return 0.0
        E = np.asarray(self.edges)
        return float(np.sum(np.linalg.norm(self.vertices[E[:, 0]] - self.vertices[E[:, 1]], axis=1)))

    @property
    def apexes(self) -> np.ndarray:
        return self.vertices[self.n_base :]

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.edges:
            return np.zeros((0, 2)), np.zeros((0, 2))
        E = np.asarray(self.edges)
        return self.vertices[E[:, 0]], self.vertices[E[:, 1]]


@dataclass(frozen=True)
class ClearanceProfile:
    delta1: np.ndarray  # per tree vertex: distance to nearest blue
    delta2: np.ndarray  # per edge: distance to nearest blue (0 if incident)
    delta3: np.ndarray  # per edge: nearest non-incident blue, inf beyond the cap


@dataclass(frozen=True, eq=False)
class SimpleCycle:
    vertices: np.ndarray
    offset: float = 0.0
    area: float = 0.0

    @property
    def length(self) -> float:
        return geom.polygon_length(self.vertices)

    def __len__(self):
        return len(self.vertices)


@dataclass
class SeparationReport:
    simple: bool
    edge_inside: list[bool]
    edge_outside: list[bool]
    locations: list[int]
    reds_strict: Optional[bool] = None
    blues_strict: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return self.simple and all(self.edge_inside) and all(self.edge_outside)


def minimum_spanning_tree(points) -> PlaneTree:
    """Prim's algorithm on the complete Euclidean graph, O(n^2)."""
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(P)
    if n <= 1:
        return PlaneTree(P, ())
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, INF)
    link = np.zeros(n, dtype=int)
    in_tree[0] = True
    best[:] = np.linalg.norm(P - P[0], axis=1)
    edges = []
    for _ in range(n - 1):
        cand = np.where(in_tree, INF, best)
        v = int(np.argmin(cand))
        edges.append((int(link[v]), v))
        in_tree[v] = True
        d = np.linalg.norm(P - P[v], axis=1)
        closer = d < best
        best = np.where(closer, d, best)
        link = np.where(closer, v, link)
    return PlaneTree(P, tuple(edges))


def clearance_profile(tree: PlaneTree, blue, tol: float = 0.0) -> ClearanceProfile:
    Bl = np.asarray(blue, dtype=float).reshape(-1, 2)
    V = tree.vertices
    m = len(tree.edges)
    if len(Bl) == 0:
        return ClearanceProfile(np.full(len(V), INF), np.full(m, INF), np.full(m, INF))
    delta1 = np.min(np.linalg.norm(V[:, None, :] - Bl[None, :, :], axis=-1), axis=1)
    if m == 0:
        return ClearanceProfile(delta1, np.zeros(0), np.zeros(0))
    A, B = tree.segments()
    D = geom.dist_points_segments(Bl, A, B)  # (blue, edge)
    delta2 = D.min(axis=0)
    delta2 = np.where(delta2 <= tol, 0.0, delta2)
    cap = geom.bbox_diagonal(V)
    positive = np.where((D > tol) & (D < cap), D, INF)
    delta3 = positive.min(axis=0)
    return ClearanceProfile(delta1, delta2, delta3)


def _detour_ok(end_pt, apex, others_a, others_b, shared_far, blue, tol) -> bool:
    """Check the new segment end_pt-apex against blues and the remaining tree edges.

    ``others`` are edges not touching ``end_pt``; ``shared_far`` are the far
    endpoints of edges that do touch it.
    """
    if len(blue) and geom.dist_points_segments(blue, [end_pt], [apex]).min() <= tol:
        return False
    if len(others_a):
        k = len(others_a)
        d = geom.segment_distances(np.repeat([end_pt], k, 0), np.repeat([apex], k, 0), others_a, others_b)
        if np.any(d <= tol):
            return False
    for o in shared_far:
        if geom.dist_point_segment(o, end_pt, apex) <= tol or geom.dist_point_segment(apex, end_pt, o) <= tol:
            return False
    return True


def bend_edges(tree: PlaneTree, blue, profile: ClearanceProfile, tol: float = 0.0, scale: float = 1.0) -> PlaneTree:
    """Replace every edge through a blue point by a two-segment detour.

    The apex sits above the middle of the span of blue feet, displaced
    perpendicular to the edge; displacement starts at a quarter of the local
    clearance and is halved until the detour is blue-free and non-crossing.
    """
    Bl = np.asarray(blue, dtype=float).reshape(-1, 2)
    incident = [k for k in range(len(tree.edges)) if profile.delta2[k] == 0.0]
    if not incident:
        return tree
    verts = [np.array(p) for p in tree.vertices]
    edges = [e for k, e in enumerate(tree.edges) if k not in set(incident)]
    pending = [tree.edges[k] for k in incident]
    for k in incident:
        u, w = tree.edges[k]
        pending.remove((u, w))
        a, b = verts[u], verts[w]
        ab = b - a
        L = float(np.linalg.norm(ab))
        on = Bl[geom.dist_points_segments(Bl, [a], [b])[:, 0] <= tol]
        t = (on - a) @ ab / (L * L)
        tm = 0.5 * (t.min() + t.max())
        foot = a + tm * ab
        normal = np.array([-ab[1], ab[0]]) / L
        current = edges + pending
        ca = np.array([verts[i] for i, _ in current]).reshape(-1, 2)
        cb = np.array([verts[j] for _, j in current]).reshape(-1, 2)
        far = np.array([u not in e and w not in e for e in current], dtype=bool)
        gap = INF
        if far.any():
            gap = float(geom.dist_points_segments([foot], ca[far], cb[far]).min())
        s = scale * min(profile.delta3[k], profile.delta1[u], profile.delta1[w], tm * L, (1 - tm) * L, gap) / 4
        if not math.isfinite(s):
            s = scale * L / 4
        checks = []
        for end in (u, w):
            touch = np.array([end in e for e in current], dtype=bool)
            shared_far = [verts[e[1] if e[0] == end else e[0]] for e in current if end in e]
            checks.append((verts[end], ca[~touch], cb[~touch], shared_far))
        chosen = None
        while chosen is None and s > tol:
            best = None
            for sign in (1.0, -1.0):
                apex = foot + sign * s * normal
                if all(_detour_ok(ep, apex, oa, ob, sf, Bl, tol) for ep, oa, ob, sf in checks):
                    clear = float(geom.dist_points_segments(Bl, [a, apex], [apex, b]).min()) if len(Bl) else INF
                    if best is None or clear > best[0]:
                        best = (clear, apex)
            if best is not None:
                chosen = best[1]
            s /= 2
        if chosen is None:
            raise DegenerateGeometry(f"detour displacement underflow on edge {u}-{w}")
        verts.append(chosen)
        idx = len(verts) - 1
        edges += [(u, idx), (idx, w)]
    return PlaneTree(np.array(verts), tuple(edges), tree.n_base)


def _sorted_adjacency(tree: PlaneTree) -> list[list[int]]:
    V = tree.vertices
    adj = [[] for _ in range(len(V))]
    for a, b in tree.edges:
        adj[a].append(b)
        adj[b].append(a)
    for v, nb in enumerate(adj):
        nb.sort(key=lambda w: math.atan2(V[w][1] - V[v][1], V[w][0] - V[v][0]))
    return adj


def _turns(tree: PlaneTree, adj):
    """Yield (v, d_in, d_out, theta) along the counterclockwise Euler tour."""
    V = tree.vertices
    u0, v0 = tree.edges[0]
    u, v = u0, v0
    for _ in range(2 * len(tree.edges)):
        nb = adj[v]
        w = nb[(nb.index(u) + 1) % len(nb)]
        d_in = (V[v] - V[u]) / np.linalg.norm(V[v] - V[u])
        d_out = (V[w] - V[v]) / np.linalg.norm(V[w] - V[v])
        back = math.atan2(-d_in[1], -d_in[0])
        fwd = math.atan2(d_out[1], d_out[0])
        theta = (fwd - back) % (2 * math.pi)
        if w == u or theta == 0.0:
            theta = 2 * math.pi
        yield v, d_in, d_out, theta
        u, v = v, w


def max_contour_offset(tree: PlaneTree, blue) -> float:
    """Largest offset the contour construction treats as safe for this tree."""
    Bl = np.asarray(blue, dtype=float).reshape(-1, 2)
    V = tree.vertices
    limit = INF
    if not tree.edges:
        if len(Bl):
            limit = float(np.linalg.norm(Bl - V[0], axis=1).min())
        return limit * OFFSET_FRACTION
    A, B = tree.segments()
    if len(Bl):
        limit = min(limit, float(geom.dist_points_segments(Bl, A, B).min()))
    E = tree.edges
    m = len(E)
    if m > 1:
        i, j = np.triu_indices(m, k=1)
        Ea, Eb = np.asarray(E)[i], np.asarray(E)[j]
        disjoint = (Ea[:, 0] != Eb[:, 0]) & (Ea[:, 0] != Eb[:, 1]) & (Ea[:, 1] != Eb[:, 0]) & (Ea[:, 1] != Eb[:, 1])
        if disjoint.any():
            d = geom.segment_distances(A[i[disjoint]], B[i[disjoint]], A[j[disjoint]], B[j[disjoint]])
            limit = min(limit, float(d.min()))
    adj = _sorted_adjacency(tree)
    lengths = {}
    for a, b in E:
        lengths[(a, b)] = lengths[(b, a)] = float(np.linalg.norm(V[a] - V[b]))
    for v, nb in enumerate(adj):
        if len(nb) < 2:
            continue
        for k in range(len(nb)):
            w1, w2 = nb[k], nb[(k + 1) % len(nb)]
            a1 = math.atan2(V[w1][1] - V[v][1], V[w1][0] - V[v][0])
            a2 = math.atan2(V[w2][1] - V[v][1], V[w2][0] - V[v][0])
            theta = (a2 - a1) % (2 * math.pi)
            if theta < math.pi:
                # miter reach along each edge is h / tan(theta / 2)
                limit = min(limit, 2 * math.tan(theta / 2) * min(lengths[(v, w1)], lengths[(v, w2)]))
    return limit * OFFSET_FRACTION


def contour_points(tree: PlaneTree, offset: float) -> np.ndarray:
    """Corner points of the offset contour (counterclockwise)."""
    h = float(offset)
    V = tree.vertices
    if not tree.edges:
        c = V[0]
        r = h * math.sqrt(2.0)
        return np.array([c + r * np.array([math.cos(a), math.sin(a)]) for a in (-0.75 * math.pi, -0.25 * math.pi, 0.25 * math.pi, 0.75 * math.pi)])
    adj = _sorted_adjacency(tree)
    out = []
    for v, d_in, d_out, theta in _turns(tree, adj):
        n1 = np.array([d_in[1], -d_in[0]])
        n2 = np.array([d_out[1], -d_out[0]])
        phi = theta - math.pi
        if phi <= 1e-12:
            denom = 1.0 + float(n1 @ n2)
            if denom < 1e-12:
                raise DegenerateGeometry("contour corner folds back on itself")
            out.append(V[v] + h * (n1 + n2) / denom)
        else:
            k = max(1, math.ceil(phi / (math.pi / 2) - 1e-9))
            step = phi / k
            a0 = math.atan2(n1[1], n1[0])
            r = h / math.cos(step / 2)
            for i in range(k):
                a = a0 + (i + 0.5) * step
                out.append(V[v] + r * np.array([math.cos(a), math.sin(a)]))
    return np.array(out)


def tree_contour(tree: PlaneTree, offset: float, tol: float = 0.0, max_halvings: int = MAX_HALVINGS) -> SimpleCycle:
    """Closed contour around the doubled tree at distance ``offset``.

    Retries with half the offset when the contour is not simple or fails to
    enclose every tree vertex.
    """
    h = float(offset)
    if not h > 0:
        raise DegenerateGeometry("offset must be positive")
    for _ in range(max_halvings + 1):
        try:
            pts = contour_points(tree, h)
        except DegenerateGeometry:
            h /= 2
            continue
        ptol = min(tol, h * 1e-6) if tol > 0 else 0.0
        if geom.polygon_is_simple(pts, ptol):
            loc = geom.classify_points(tree.vertices, pts, ptol)
            if np.all(loc == geom.Location.INTERIOR):
                return SimpleCycle(pts, h, geom.polygon_area(pts))
        h /= 2
    raise DegenerateGeometry("offset contour is not simple after repeated halving")


def area_bound(cycle: SimpleCycle, tree: PlaneTree, n: int) -> float:
    h = cycle.offset
    return 2 * h * tree.length + 4 * n * h * h


@dataclass
class Construction:
    """Intermediate objects of :func:`build_separating_cycle`, kept for audits."""

    cycle: SimpleCycle
    tree: PlaneTree
    bent: PlaneTree
    profile: ClearanceProfile
    coloring: Coloring


def construct(
    instance: GeomInstance,
    coloring: Coloring,
    tree: Optional[PlaneTree] = None,
    rel_tol: float = geom.REL_TOL,
    max_offset: float = INF,
) -> Construction:
    if instance.dim != 2:
        raise ValueError("planar instance required")
    colors = coloring.colors
    if len(colors) != instance.n:
        raise InfeasibleColoring("coloring length does not match the instance")
    bad = monochromatic_edges(instance.hypergraph, colors)
    if bad:
        raise InfeasibleColoring(f"edge {bad[0]} is monochromatic")
    P = instance.points
    red = np.array([c == RED for c in colors])
    if not red.any():
        raise InfeasibleColoring("coloring has no red point")
    R, Bl = P[red], P[~red]
    tol = geom.default_tolerance(P, rel_tol)
    if tree is None:
        tree = minimum_spanning_tree(R)
    profile = clearance_profile(tree, Bl, tol)
    span = max(geom.bbox_diagonal(P), 1.0)
    n = instance.n
    scale = 1.0
    for _ in range(40):
        bent = bend_edges(tree, Bl, profile, tol, scale)
        h = min(max_contour_offset(bent, Bl), max_offset, span * OFFSET_FRACTION)
        # detour length must not eat the contour's length budget
        if 2 * (bent.length - tree.length) <= 4 * h * n:
            break
        scale /= 2
    last = None
    for _ in range(MAX_HALVINGS + 1):
        try:
            cycle = tree_contour(bent, h, tol)
        except DegenerateGeometry as exc:
            last = exc
            h /= 2
            continue
        rep = validate_separation(cycle, instance, coloring, tol)
        if rep.passed and rep.reds_strict and rep.blues_strict:
            return Construction(cycle, tree, bent, profile, coloring)
        h /= 2
    raise last or DegenerateGeometry("could not separate red and blue points")


def build_separating_cycle(instance: GeomInstance, coloring: Coloring, **kw) -> SimpleCycle:
    return construct(instance, coloring, **kw).cycle


def validate_separation(cycle, instance: GeomInstance, coloring: Optional[Coloring] = None, tol: float = 0.0) -> SeparationReport:
    V = np.asarray(getattr(cycle, "vertices", cycle), dtype=float)
    if len(V) >= 3:
        simple = geom.polygon_is_simple(V, tol)
        loc = geom.classify_points(instance.points, V, tol)
    else:
        # a point or doubled segment: everything on it counts as inside
        simple = len(V) >= 1
        if len(V) == 1:
            d = np.linalg.norm(instance.points - V[0], axis=1)
        else:
            d = geom.dist_points_segments(instance.points, V[:1], V[1:2])[:, 0]
        loc = np.where(d <= tol, int(geom.Location.BOUNDARY), int(geom.Location.EXTERIOR))
    inside = [bool(any(loc[v] >= 0 for v in e)) for e in instance.edges]
    outside = [bool(any(loc[v] < 0 for v in e)) for e in instance.edges]
    rs = bs = None
    if coloring is not None:
        cols = np.array(coloring.colors)
        rs = bool(np.all(loc[cols == RED] == geom.Location.INTERIOR))
        bs = bool(np.all(loc[cols == BLUE] == geom.Location.EXTERIOR))
    return SeparationReport(simple, inside, outside, loc.tolist(), rs, bs)


def feasible_coloring(instance: GeomInstance, size_guard: Optional[int] = None) -> Coloring:
    """Coloring used for construction: supplied, bipartition, or exact search.

    Raises :class:`Infeasible` when no proper coloring exists.
    """
    h = instance.hypergraph
    if instance.colors is not None:
        if monochromatic_edges(h, instance.colors):
            raise InfeasibleColoring("supplied coloring has a monochromatic edge")
        return Coloring(instance.colors)
    if instance.is_graph:
        return bipartition(h)
    if size_guard is not None and instance.n > size_guard:
        raise TooLarge(f"size guard: {instance.n} vertices exceed {size_guard}")
    col = two_color_exact(h)
    if col is None:
        raise Infeasible("hypergraph is not 2-colorable")
    return col


def solve_construct(instance: GeomInstance, **kw) -> SimpleCycle:
    return build_separating_cycle(instance, feasible_coloring(instance), **kw)
