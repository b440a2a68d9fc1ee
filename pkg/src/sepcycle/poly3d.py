"""Separating polyhedra in 3-space: square-section tubes around red paths."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import geom
from .approx import few_path_3d
from .errors import DegenerateGeometry, NoCandidate
from .hypergraph import BLUE, RED, Coloring, bipartition
from .instances_io import GeomInstance

SQRT3 = math.sqrt(3.0)
MAX_TURN = math.radians(179.0)
# fixed irrational-looking direction for parity ray casts
RAY_DIR = np.array([0.5773502691896258, 0.6123724356957945, 0.5400617248673217])
RAY_DIR = RAY_DIR / np.linalg.norm(RAY_DIR)


@dataclass(frozen=True, eq=False)
class Path3:
    """Polygonal path in 3-space. ``n_base`` counts the original (red) vertices."""

    vertices: np.ndarray
    n_base: int = -1
    monotone: bool = False

    @property
    def length(self) -> float:
        return geom.polygon_length(self.vertices, closed=False)

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices[:-1], self.vertices[1:]


def monotone_path_3d(red) -> Path3:
    """Red points sorted by x with ties broken by y then z (an infinitesimal shear)."""
    R = np.asarray(red, dtype=float).reshape(-1, 3)
    order = np.lexsort((R[:, 2], R[:, 1], R[:, 0]))
    return Path3(R[order], len(R), True)


def _perp_frame(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    axis = np.eye(3)[int(np.argmin(np.abs(t)))]
    u = np.cross(t, axis)
    u /= np.linalg.norm(u)
    return u, np.cross(t, u)


def _detour_directions(e: np.ndarray, keep_x: bool) -> list[np.ndarray]:
    t = e / np.linalg.norm(e)
    if keep_x:
        u = np.cross(t, [1.0, 0.0, 0.0])
        if np.linalg.norm(u) > 1e-12:
            u /= np.linalg.norm(u)
            return [u, -u]
    u, w = _perp_frame(t)
    return [math.cos(a) * u + math.sin(a) * w for a in np.arange(8) * math.pi / 4]


def avoid_blue_3d(path: Path3, blue, tol: float = 0.0) -> Path3:
    """Replace every edge touching a blue point by a two-segment detour.

    For monotone paths the single candidate edge per blue point is found by
    binary search on x; otherwise all edges are tested.
    """
    V = path.vertices
    B = np.asarray(blue, dtype=float).reshape(-1, 3)
    if len(V) < 2 or len(B) == 0:
        return path
    A0, A1 = V[:-1], V[1:]
    hits: dict[int, list[int]] = {}
    if path.monotone:
        xs = V[:, 0]
        for b, p in enumerate(B):
            k = int(np.searchsorted(xs, p[0], side="left"))
            for e in {k - 1, k}:
                if 0 <= e < len(V) - 1 and geom.dist_point_segment(p, A0[e], A1[e]) <= tol:
                    hits.setdefault(e, []).append(b)
    else:
        D = geom.dist_points_segments(B, A0, A1)
        for b, e in zip(*np.nonzero(D <= tol)):
            hits.setdefault(int(e), []).append(int(b))
    if not hits:
        return path
    out = [V[0]]
    for e in range(len(V) - 1):
        a, c = V[e], V[e + 1]
        if e in hits:
            out.append(_detour_apex(a, c, B, hits[e], V, path.monotone, tol))
        out.append(c)
    return Path3(np.array(out), path.n_base, path.monotone)


def _detour_apex(a, c, B, incident, V, keep_x, tol) -> np.ndarray:
    e = c - a
    L = float(np.linalg.norm(e))
    feet = np.clip([(B[b] - a) @ e / (L * L) for b in incident], 0.0, 1.0)
    tm = (min(feet) + max(feet)) / 2
    foot = a + tm * e
    others = [p for p in np.concatenate([B, V]) if not (np.allclose(p, a) or np.allclose(p, c))]
    others = np.array(others).reshape(-1, 3)
    near = geom.dist_points_segments(others, [a], [c])[:, 0]
    near = near[near > tol]
    gap = float(near.min()) if len(near) else L
    s = min(tm * L, (1 - tm) * L, gap) / 4
    best = None
    for d in _detour_directions(e, keep_x):
        step = s
        for _ in range(40):
            apex = foot + step * d
            clear = geom.dist_points_segments(B, [a, apex], [apex, c]).min()
            if clear > tol:
                break
            step /= 2
        else:
            continue
        if best is None or clear > best[0]:
            best = (clear, apex)
    if best is None:
        raise DegenerateGeometry("detour displacement underflow")
    return best[1]


def segment_distances_3d(a1, b1, a2, b2) -> np.ndarray:
    """Elementwise distance between segments a1[i]b1[i] and a2[i]b2[i] (any dimension)."""
    a1, b1, a2, b2 = (np.asarray(x, dtype=float) for x in (a1, b1, a2, b2))
    d1, d2, r = b1 - a1, b2 - a2, a1 - a2
    A = np.sum(d1 * d1, axis=1)
    E = np.sum(d2 * d2, axis=1)
    F = np.sum(d2 * r, axis=1)
    C = np.sum(d1 * r, axis=1)
    Bc = np.sum(d1 * d2, axis=1)
    denom = A * E - Bc * Bc
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-300, np.clip((Bc * F - C * E) / denom, 0, 1), 0.0)
        t = np.where(E > 0, (Bc * s + F) / E, 0.0)
        s = np.where(t < 0, np.where(A > 0, np.clip(-C / A, 0, 1), 0.0), s)
        s = np.where(t > 1, np.where(A > 0, np.clip((Bc - C) / A, 0, 1), 0.0), s)
    t = np.clip(t, 0, 1)
    p = a1 + s[:, None] * d1
    q = a2 + t[:, None] * d2
    return np.linalg.norm(p - q, axis=1)


def _turn_cosines(V: np.ndarray) -> np.ndarray:
    """cos(theta/2) at each interior vertex, theta the turning angle."""
    if len(V) < 3:
        return np.ones(0)
    t = np.diff(V, axis=0)
    t /= np.linalg.norm(t, axis=1)[:, None]
    c = np.clip(np.sum(t[:-1] * t[1:], axis=1), -1.0, 1.0)
    return np.sqrt((1 + c) / 2)


def split_sharp_turns(path: Path3, blue, tol: float = 0.0) -> Path3:
    """Insert a vertex beside every turn sharper than 179 degrees."""
    V = path.vertices
    if len(V) < 3:
        return path
    B = np.asarray(blue, dtype=float).reshape(-1, 3)
    limit = math.cos(MAX_TURN / 2)
    cos = _turn_cosines(V)
    if np.all(cos > limit):
        return path
    out = [V[0]]
    for i in range(1, len(V) - 1):
        out.append(V[i])
        if cos[i - 1] > limit:
            continue
        t_in = (V[i] - V[i - 1]) / np.linalg.norm(V[i] - V[i - 1])
        p, _ = _perp_frame(t_in)
        s = min(np.linalg.norm(V[i] - V[i - 1]), np.linalg.norm(V[i + 1] - V[i])) / 4
        for _ in range(40):
            w = V[i] + s * p
            if len(B) == 0 or geom.dist_points_segments(B, [V[i], w], [w, V[i + 1]]).min() > tol:
                break
            s /= 2
        else:
            raise DegenerateGeometry("cannot split a near-reversal turn")
        out.append(w)
    out.append(V[-1])
    return Path3(np.array(out), path.n_base, False)


def max_tube_delta(path: Path3, blue, span: float = 1.0) -> float:
    """Largest safe half-width divided by 8 (blue clearance, edge separation, corner spikes)."""
    V = path.vertices
    B = np.asarray(blue, dtype=float).reshape(-1, 3)
    cos = _turn_cosines(V)
    cmin = float(cos.min()) if len(cos) else 1.0
    limit = span
    if len(B):
        if len(V) == 1:
            clear = float(np.linalg.norm(B - V[0], axis=1).min())
        else:
            clear = float(geom.dist_points_segments(B, V[:-1], V[1:]).min())
        limit = min(limit, clear * cmin)
    k = len(V) - 1
    if k >= 3:
        I, J = np.triu_indices(k, 2)
        sep = segment_distances_3d(V[I], V[I + 1], V[J], V[J + 1])
        limit = min(limit, float(sep.min()) * cmin)
    if len(cos):
        lens = np.linalg.norm(np.diff(V, axis=0), axis=1)
        adj = np.minimum(lens[:-1], lens[1:])
        limit = min(limit, float(np.min(2 * cos * adj)))
    return limit / 8


# ------------------------------------------------------------------ meshes


@dataclass(eq=False)
class MeshAudit:
    watertight: bool
    manifold: bool
    oriented: bool
    euler: int
    volume: float

    @property
    def passed(self) -> bool:
        return self.watertight and self.manifold and self.oriented and self.euler == 2 and self.volume > 0


@dataclass(eq=False)
class TubePolyhedron:
    skeleton: Path3
    delta: float
    vertices: np.ndarray
    faces: np.ndarray
    _edges: Optional[tuple] = field(default=None, repr=False)

    def edge_table(self):
        """Undirected edges with their incident faces."""
        if self._edges is None:
            inc: dict[tuple[int, int], list[int]] = {}
            for f, tri in enumerate(self.faces):
                for k in range(3):
                    u, v = int(tri[k]), int(tri[(k + 1) % 3])
                    inc.setdefault((min(u, v), max(u, v)), []).append(f)
            self._edges = inc
        return self._edges

    def face_normals(self) -> np.ndarray:
        T = self.vertices[self.faces]
        n = np.cross(T[:, 1] - T[:, 0], T[:, 2] - T[:, 0])
        return n / np.linalg.norm(n, axis=1)[:, None]

    @property
    def volume(self) -> float:
        T = self.vertices[self.faces]
        return float(np.sum(np.einsum("ij,ij->i", T[:, 0], np.cross(T[:, 1], T[:, 2]))) / 6.0)

    @property
    def perimeter(self) -> float:
        """Total length of creased edges; flat triangulation diagonals are excluded."""
        N = self.face_normals()
        total = 0.0
        for (u, v), fs in self.edge_table().items():
            if len(fs) != 2 or float(N[fs[0]] @ N[fs[1]]) < 1 - 1e-9:
                total += float(np.linalg.norm(self.vertices[u] - self.vertices[v]))
        return total

    def audit(self) -> MeshAudit:
        table = self.edge_table()
        watertight = all(len(fs) == 2 for fs in table.values())
        directed = set()
        oriented = True
        for tri in self.faces:
            for k in range(3):
                d = (int(tri[k]), int(tri[(k + 1) % 3]))
                if d in directed:
                    oriented = False
                directed.add(d)
        manifold = watertight and _vertex_links_ok(self.faces, len(self.vertices))
        euler = len(self.vertices) - len(table) + len(self.faces)
        return MeshAudit(watertight, manifold, oriented, euler, self.volume)

    def contains(self, points) -> np.ndarray:
        """Ray-cast parity (Moller-Trumbore) along a fixed generic direction."""
        return ray_parity(self.vertices, self.faces, points)

    def distance_classify(self, points) -> np.ndarray:
        """+1 within delta of the skeleton, -1 beyond the tube's reach, 0 undecided."""
        P = np.asarray(points, dtype=float).reshape(-1, 3)
        d = skeleton_distance(self.skeleton, P)
        cos = _turn_cosines(self.skeleton.vertices)
        reach = SQRT3 * self.delta / (float(cos.min()) if len(cos) else 1.0)
        return np.where(d <= self.delta, 1, np.where(d > reach, -1, 0))


def skeleton_distance(path: Path3, points) -> np.ndarray:
    V = path.vertices
    P = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(V) == 1:
        return np.linalg.norm(P - V[0], axis=1)
    return geom.dist_points_segments(P, V[:-1], V[1:]).min(axis=1)


def _vertex_links_ok(faces: np.ndarray, nv: int) -> bool:
    # the faces around each vertex must form a single cycle
    around: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
    for tri in faces:
        for k in range(3):
            around[int(tri[k])].append((int(tri[(k + 1) % 3]), int(tri[(k + 2) % 3])))
    for links in around:
        if not links:
            return False
        nxt = dict(links)
        if len(nxt) != len(links):
            return False
        start = links[0][0]
        cur, steps = start, 0
        while True:
            cur = nxt.get(cur)
            steps += 1
            if cur is None:
                return False
            if cur == start:
                break
        if steps != len(links):
            return False
    return True


def ray_parity(vertices, faces, points, direction=RAY_DIR) -> np.ndarray:
    T = np.asarray(vertices, dtype=float)[np.asarray(faces)]
    P = np.asarray(points, dtype=float).reshape(-1, 3)
    v0, e1, e2 = T[:, 0], T[:, 1] - T[:, 0], T[:, 2] - T[:, 0]
    h = np.cross(direction, e2)
    a = np.einsum("ij,ij->i", e1, h)
    ok = np.abs(a) > 1e-300
    f = np.where(ok, 1.0 / np.where(ok, a, 1.0), 0.0)
    s = P[:, None, :] - v0[None]
    u = f[None] * np.einsum("pij,ij->pi", s, h)
    q = np.cross(s, e1[None])
    v = f[None] * (q @ direction)
    t = f[None] * np.einsum("pij,ij->pi", q, e2)
    hit = ok[None] & (u >= 0) & (v >= 0) & (u + v <= 1) & (t > 0)
    return (hit.sum(axis=1) % 2) == 1


def tube_polyhedron(path: Path3, delta: float) -> TubePolyhedron:
    """Square-section tube of half-width ``delta`` with mitered joints.

    Cross-sections at interior vertices lie in the bisector planes; the
    frame is transported by minimal rotations; both ends are extended by
    ``delta`` so that a single vertex yields a cube of side 2*delta.
    """
    if delta <= 0:
        raise DegenerateGeometry("tube half-width must be positive")
    V = np.asarray(path.vertices, dtype=float)
    if len(V) == 1:
        t = [np.array([1.0, 0.0, 0.0])]
    else:
        d = np.diff(V, axis=0)
        lens = np.linalg.norm(d, axis=1)
        if np.any(lens == 0):
            raise DegenerateGeometry("repeated path vertex")
        t = list(d / lens[:, None])
        if len(V) >= 3 and np.any(_turn_cosines(V) <= math.cos(MAX_TURN / 2)):
            raise DegenerateGeometry("turn sharper than 179 degrees")
    u, w = _perp_frame(t[0])
    corners = lambda u, w: [delta * (su * u + sw * w) for su, sw in ((1, 1), (-1, 1), (-1, -1), (1, -1))]
    rings = [[V[0] - delta * t[0] + c for c in corners(u, w)]]
    for i in range(1, len(V) - 1):
        a, b = t[i - 1], t[i]
        n = a + b
        n /= np.linalg.norm(n)
        cs = corners(u, w)
        rings.append([V[i] + c - (c @ n) / (a @ n) * a for c in cs])
        u, w = _rotate_frame(u, w, a, b)
    rings.append([V[-1] + delta * t[-1] + c for c in corners(u, w)])
    verts = np.array([p for r in rings for p in r])
    faces = []
    for r in range(len(rings) - 1):
        for k in range(4):
            a0, a1 = 4 * r + k, 4 * r + (k + 1) % 4
            b0, b1 = a0 + 4, a1 + 4
            faces += [(a0, a1, b1), (a0, b1, b0)]
    last = 4 * (len(rings) - 1)
    faces += [(0, 2, 1), (0, 3, 2), (last, last + 1, last + 2), (last, last + 2, last + 3)]
    return TubePolyhedron(path, float(delta), verts, np.array(faces, dtype=int))


def _rotate_frame(u, w, a, b):
    """Rotate (u, w) by the minimal rotation taking direction a to b."""
    axis = np.cross(a, b)
    s = np.linalg.norm(axis)
    c = float(a @ b)
    if s < 1e-15:
        return u, w
    k = axis / s

    def rot(x):
        return x * c + np.cross(k, x) * s + k * (k @ x) * (1 - c)

    return rot(u), rot(w)


# ------------------------------------------------------------ constructions


@dataclass(eq=False)
class PolyConstruction:
    tube: TubePolyhedron
    coloring: Coloring
    path: Path3
    kind: str = "monotone"


def _red_blue(instance: GeomInstance, colors):
    P = instance.points
    red = P[[i for i, c in enumerate(colors) if c == RED]]
    blue = P[[i for i, c in enumerate(colors) if c == BLUE]]
    return red, blue


def tube_for_path(path: Path3, blue, span: float, tol: float) -> TubePolyhedron:
    bent = avoid_blue_3d(path, blue, tol)
    bent = split_sharp_turns(bent, blue, tol)
    delta = max_tube_delta(bent, blue, span)
    if not delta > 0:
        raise DegenerateGeometry("no positive tube half-width")
    return tube_polyhedron(bent, delta)


def construct_3d(instance: GeomInstance, coloring: Coloring, path: Optional[Path3] = None, rel_tol: float = geom.REL_TOL) -> PolyConstruction:
    if instance.dim != 3:
        raise ValueError("expected a 3D instance")
    if not coloring.is_valid_for(instance.hypergraph):
        raise ValueError("coloring has a monochromatic edge")
    red, blue = _red_blue(instance, coloring.colors)
    tol = geom.default_tolerance(instance.points, rel_tol)
    span = geom.bbox_diagonal(instance.points) or 1.0
    kind = "monotone" if path is None else "given"
    if path is None:
        path = monotone_path_3d(red)
    tube = tube_for_path(path, blue, span, tol)
    return PolyConstruction(tube, coloring, path, kind)


def build_separating_polyhedron(instance: GeomInstance, **kw) -> TubePolyhedron:
    """Bipartition, monotone red path, blue detours, tube."""
    coloring = bipartition(instance.hypergraph)
    return construct_3d(instance, coloring, **kw).tube


@dataclass(eq=False)
class Separation3D:
    distance: np.ndarray  # +1 / 0 / -1 per instance point
    raycast: np.ndarray  # bool per instance point
    reds_inside: bool
    blues_outside: bool
    agree: bool
    audit: MeshAudit

    @property
    def passed(self) -> bool:
        return self.reds_inside and self.blues_outside and self.agree and self.audit.passed


def validate_polyhedron(tube: TubePolyhedron, instance: GeomInstance, colors) -> Separation3D:
    P = instance.points
    dist = tube.distance_classify(P)
    ray = tube.contains(P)
    red = np.array([c == RED for c in colors])
    agree = bool(np.all(np.where(dist == 1, ray, True)) and np.all(np.where(dist == -1, ~ray, True)) and np.all(dist != 0))
    return Separation3D(
        dist,
        ray,
        bool(np.all(dist[red] == 1)),
        bool(np.all(dist[~red] == -1)),
        agree,
        tube.audit(),
    )


def separating_edges_ok(instance: GeomInstance, inside) -> bool:
    """Every edge has a vertex inside and a vertex outside."""
    return all(any(inside[v] for v in e) and not all(inside[v] for v in e) for e in instance.edges)


# ------------------------------------------------------- the approximation


@dataclass(frozen=True)
class GuessBox:
    a: tuple
    b: tuple

    @property
    def size(self) -> float:
        return math.dist(self.a, self.b)

    @property
    def center(self) -> np.ndarray:
        return (np.asarray(self.a) + np.asarray(self.b)) / 2

    def frame(self) -> np.ndarray:
        """Rows u (along ab), v, w."""
        t = (np.asarray(self.b) - np.asarray(self.a)) / self.size
        v, w = _perp_frame(t)
        return np.stack([t, v, w])

    def local(self, points) -> np.ndarray:
        return (np.asarray(points, dtype=float).reshape(-1, 3) - self.center) @ self.frame().T

    def contains(self, points, tol: float = 0.0) -> np.ndarray:
        X = self.local(points)
        half = np.array([1.0, SQRT3, SQRT3]) * self.size / 2
        return np.all(np.abs(X) <= half + tol, axis=1)


@dataclass(eq=False)
class Approx3DResult:
    tube: TubePolyhedron
    coloring: Coloring
    pair: tuple[int, int]
    candidate_index: int
    candidates: int
    abandoned: int
    kind: str


def classify_box(instance: GeomInstance, coloring: Coloring, i: int, j: int, tol: float = 0.0):
    P = instance.points
    inside = GuessBox(tuple(P[i]), tuple(P[j])).contains(P, tol)
    comp = np.asarray(coloring.component)
    k = comp.max() + 1
    has_edge = np.zeros(k, dtype=bool)
    for e in instance.edges:
        has_edge[comp[e[0]]] = True
    red = np.array([c == RED for c in coloring.colors])
    red_out = np.bincount(comp, weights=(red & ~inside), minlength=k) > 0
    blue_out = np.bincount(comp, weights=(~red & ~inside), minlength=k) > 0
    if np.any(has_edge & red_out & blue_out):
        return None
    flip = red_out & ~blue_out
    new_red = np.where(flip[comp], ~red, red) & has_edge[comp]
    return tuple(RED if r else BLUE for r in new_red)


def sqrt_approx_3d_detailed(instance: GeomInstance, rel_tol: float = geom.REL_TOL) -> Approx3DResult:
    if instance.dim != 3 or not instance.is_graph:
        raise ValueError("sqrt_approx_3d expects a 3D graph instance")
    base = bipartition(instance.hypergraph)
    P = instance.points
    tol = geom.default_tolerance(P, rel_tol)
    span = geom.bbox_diagonal(P) or 1.0
    cache: dict = {}
    best = None
    cand = abandoned = 0
    for i in range(instance.n):
        for j in range(i + 1, instance.n):
            idx = cand
            cand += 1
            colors = classify_box(instance, base, i, j, tol)
            if colors is None:
                abandoned += 1
                continue
            if colors in cache:
                continue
            red, blue = _red_blue(instance, colors)
            box = GuessBox(tuple(P[i]), tuple(P[j]))
            L = box.size
            half = np.array([1.0, SQRT3, SQRT3]) * L / 2
            few = few_path_3d(box.local(red), (*(-half), *half))
            kind = "few"
            try:
                tube = tube_for_path(Path3(red[few.order], len(red), False), blue, span, tol)
            except DegenerateGeometry:
                kind = "monotone"
                tube = tube_for_path(monotone_path_3d(red), blue, span, tol)
            cache[colors] = tube
            if best is None or tube.perimeter < best[0]:
                best = (tube.perimeter, idx, (i, j), tube, colors, kind)
    if best is None:
        raise NoCandidate("every diameter guess was abandoned")
    _, idx, pair, tube, colors, kind = best
    return Approx3DResult(tube, Coloring(colors, base.component, base.flipped), pair, idx, cand, abandoned, kind)


def sqrt_approx_3d(instance: GeomInstance, **kw) -> TubePolyhedron:
    return sqrt_approx_3d_detailed(instance, **kw).tube


# ------------------------------------------------------------------ export


def to_stl(tube: TubePolyhedron, name: str = "tube") -> str:
    N = tube.face_normals()
    lines = [f"solid {name}"]
    for f, tri in enumerate(tube.faces):
        lines.append("  facet normal " + " ".join(repr(float(x)) for x in N[f]))
        lines.append("    outer loop")
        for v in tri:
            lines.append("      vertex " + " ".join(repr(float(x)) for x in tube.vertices[v]))
        lines.append("    endloop")
        lines.append("  endfacet")
    lines.append(f"endsolid {name}")
    return "\n".join(lines) + "\n"


def to_off(tube: TubePolyhedron) -> str:
    lines = ["OFF", f"{len(tube.vertices)} {len(tube.faces)} 0"]
    lines += [" ".join(repr(float(x)) for x in v) for v in tube.vertices]
    lines += ["3 " + " ".join(str(int(i)) for i in f) for f in tube.faces]
    return "\n".join(lines) + "\n"
