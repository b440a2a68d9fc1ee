"""Problem instances: the JSON document format and the generators.

Document layout (UTF-8, LF)::

    {"dim": 2, "points": [[x, y], ...], "edges": [[i, j, ...], ...],
     "colors": ["R", "B", ...],            # optional
     "metadata": {"name": "...", "seed": 0, "convex": false}}
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import geom
from .errors import ParseError, ValidationError
from .hypergraph import BLUE, RED, Coloring, Hypergraph


@dataclass(frozen=True, eq=False)
class GeomInstance:
    dim: int
    points: np.ndarray
    edges: tuple[tuple[int, ...], ...]
    colors: Optional[tuple[str, ...]] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, self.dim) if len(self.points) else np.zeros((0, self.dim))
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "edges", tuple(tuple(int(v) for v in e) for e in self.edges))
        if self.colors is not None:
            object.__setattr__(self, "colors", tuple(self.colors))
        validate_instance(self)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def hypergraph(self) -> Hypergraph:
        return Hypergraph(self.n, self.edges)

    @property
    def is_graph(self) -> bool:
        return all(len(e) == 2 for e in self.edges)

    @property
    def is_matching(self) -> bool:
        seen = set()
        for e in self.edges:
            if len(e) != 2 or seen & set(e):
                return False
            seen.update(e)
        return True

    @property
    def supplied_coloring(self) -> Optional[Coloring]:
        if self.colors is None:
            return None
        return Coloring(self.colors)

    def __eq__(self, other):
        if not isinstance(other, GeomInstance):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.points.shape == other.points.shape
            and bool(np.array_equal(self.points, other.points))
            and self.edges == other.edges
            and self.colors == other.colors
            and self.metadata == other.metadata
        )

    __hash__ = None

    def pairs(self) -> list[tuple[int, int]]:
        return [tuple(e) for e in self.edges]


def validate_instance(inst: GeomInstance) -> None:
    if inst.dim not in (2, 3):
        raise ValidationError(f"dim: must be 2 or 3, got {inst.dim}")
    pts = inst.points
    if not np.all(np.isfinite(pts)):
        bad = int(np.argwhere(~np.isfinite(pts))[0][0])
        raise ValidationError(f"points[{bad}]: non-finite coordinate")
    seen = {}
    for i, p in enumerate(map(tuple, pts.tolist())):
        if p in seen:
            raise ValidationError(f"points[{i}]: duplicate of points[{seen[p]}]")
        seen[p] = i
    for k, e in enumerate(inst.edges):
        if len(e) < 2:
            raise ValidationError(f"edges[{k}]: singleton edge")
        if len(set(e)) != len(e):
            raise ValidationError(f"edges[{k}]: repeated vertex")
        for v in e:
            if not 0 <= v < len(pts):
                raise ValidationError(f"edges[{k}]: bad index {v}")
    if inst.colors is not None:
        if len(inst.colors) != len(pts):
            raise ValidationError("colors: length differs from number of points")
        for i, c in enumerate(inst.colors):
            if c not in (RED, BLUE):
                raise ValidationError(f"colors[{i}]: expected 'R' or 'B', got {c!r}")
    if inst.metadata.get("convex"):
        if inst.dim != 2 or not in_strict_convex_position(pts):
            raise ValidationError("metadata.convex: points are not in strictly convex position")


def in_strict_convex_position(points, tol: float = 0.0) -> bool:
    pts = np.asarray(points, dtype=float)
    if len(pts) < 3:
        return True
    return len(geom.hull_indices(pts, tol)) == len(pts)


def _fmt(x: float):
    x = float(x)
    return int(x) if x.is_integer() and abs(x) < 2**53 else x


def to_document(inst: GeomInstance) -> dict:
    doc = {
        "dim": inst.dim,
        "points": [[_fmt(c) for c in p] for p in inst.points.tolist()],
        "edges": [list(e) for e in inst.edges],
    }
    if inst.colors is not None:
        doc["colors"] = list(inst.colors)
    doc["metadata"] = inst.metadata
    return doc


def serialize_instance(inst: GeomInstance) -> str:
    """Canonical text: one point / edge per line, keys in fixed order."""
    doc = to_document(inst)
    lines = ["{", f'  "dim": {doc["dim"]},', '  "points": [']
    lines += [f"    {json.dumps(p)}," for p in doc["points"]]
    if doc["points"]:
        lines[-1] = lines[-1][:-1]
    lines.append("  ],")
    lines.append('  "edges": [')
    lines += [f"    {json.dumps(e)}," for e in doc["edges"]]
    if doc["edges"]:
        lines[-1] = lines[-1][:-1]
    lines.append("  ],")
    if "colors" in doc:
        lines.append(f'  "colors": {json.dumps(doc["colors"])},')
    lines.append(f'  "metadata": {json.dumps(doc["metadata"], sort_keys=True)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> GeomInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level: expected an object")
    for key in ("dim", "points", "edges"):
        if key not in doc:
            raise ParseError(f"{key}: missing field")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise ParseError("dim: expected an integer")
    points = doc["points"]
    if not isinstance(points, list):
        raise ParseError("points: expected a list")
    for i, p in enumerate(points):
        if not isinstance(p, list) or len(p) != dim or not all(
            isinstance(c, (int, float)) and not isinstance(c, bool) for c in p
        ):
            raise ParseError(f"points[{i}]: expected {dim} numbers")
    edges = doc["edges"]
    if not isinstance(edges, list):
        raise ParseError("edges: expected a list")
    for k, e in enumerate(edges):
        if not isinstance(e, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in e):
            raise ParseError(f"edges[{k}]: expected a list of integer indices")
    colors = doc.get("colors")
    if colors is not None and not isinstance(colors, list):
        raise ParseError("colors: expected a list")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise ParseError("metadata: expected an object")
    return GeomInstance(
        dim=dim,
        points=np.array(points, dtype=float).reshape(-1, dim) if points else np.zeros((0, dim)),
        edges=tuple(tuple(e) for e in edges),
        colors=tuple(colors) if colors is not None else None,
        metadata=meta,
    )


def load_instance(path) -> GeomInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def save_instance(inst: GeomInstance, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_instance(inst))


# ---------------------------------------------------------------- generators


def gen_grid_hard(k: int) -> GeomInstance:
    """k*k segments joining corresponding nodes of two unit-square grids one unit apart."""
    if k < 1:
        raise ValueError("k >= 1")
    ticks = [0.5] if k == 1 else [i / (k - 1) for i in range(k)]
    left = [(x, y) for y in ticks for x in ticks]
    right = [(x + 2.0, y) for x, y in left]
    pts = left + right
    n = len(left)
    edges = [(i, i + n) for i in range(n)]
    return GeomInstance(2, np.array(pts), tuple(edges), metadata={"name": f"grid_hard_{k}"})


def gen_convex(n: int, seed: int = 0) -> GeomInstance:
    """n random pairs of 2n points on a random ellipse (strictly convex)."""
    if n < 1:
        raise ValueError("n >= 1")
    rng = np.random.default_rng(seed)
    m = 2 * n
    # jittered equal spacing keeps neighbouring points well apart
    base = np.arange(m) / m * 2 * math.pi
    ang = base + rng.uniform(0.1, 0.9, size=m) * (2 * math.pi / m)
    ang = (ang + rng.uniform(0, 2 * math.pi)) % (2 * math.pi)
    ax, by = 1.0, rng.uniform(0.6, 1.0)
    rot = rng.uniform(0, math.pi)
    xy = np.stack([ax * np.cos(ang), by * np.sin(ang)], axis=1)
    R = np.array([[math.cos(rot), -math.sin(rot)], [math.sin(rot), math.cos(rot)]])
    xy = np.round(xy @ R.T, 12)
    perm = rng.permutation(m)
    edges = tuple((int(perm[2 * i]), int(perm[2 * i + 1])) for i in range(n))
    return GeomInstance(2, xy, edges, metadata={"name": f"convex_{n}", "seed": int(seed), "convex": True})


def gen_odd_cycle(length: int) -> GeomInstance:
    if length < 3 or length % 2 == 0:
        raise ValueError("odd length >= 3 required")
    return _cycle_instance(length, f"odd_cycle_{length}")


def gen_even_cycle(length: int) -> GeomInstance:
    if length < 4 or length % 2:
        raise ValueError("even length >= 4 required")
    return _cycle_instance(length, f"even_cycle_{length}")


def gen_infeasible_triangle() -> GeomInstance:
    return gen_odd_cycle(3)


def _cycle_instance(length: int, name: str) -> GeomInstance:
    ang = np.arange(length) * 2 * math.pi / length
    pts = np.round(np.stack([np.cos(ang), np.sin(ang)], axis=1), 12)
    edges = tuple((i, (i + 1) % length) for i in range(length))
    return GeomInstance(2, pts, edges, metadata={"name": name})


def gen_escape_square() -> GeomInstance:
    """Path a-b-c-d with b, c close together and a, d far apart.

    The cheapest vertex cover {b, c} fits in a tiny square, but b and c get
    different colors, so no separating cycle lives inside that square.
    """
    pts = np.array([[-4.0, 2.0], [0.0, 0.0], [0.2, 0.1], [4.0, -2.0]])
    edges = ((0, 1), (1, 2), (2, 3))
    return GeomInstance(2, pts, edges, metadata={"name": "escape_square"})


def gen_matching(n: int, seed: int = 0, dim: int = 2) -> GeomInstance:
    """n random segments with endpoints uniform in the unit square (cube)."""
    rng = np.random.default_rng(seed)
    pts = rng.random((2 * n, dim))
    edges = tuple((2 * i, 2 * i + 1) for i in range(n))
    return GeomInstance(dim, pts, edges, metadata={"name": f"matching_{n}", "seed": int(seed)})


def gen_bipartite(n: int, m: int, seed: int = 0, dim: int = 2) -> GeomInstance:
    """Random bipartite geometric graph: random sides, m random cross edges."""
    rng = np.random.default_rng(seed)
    pts = rng.random((n, dim))
    side = rng.integers(0, 2, size=n)
    side[0], side[-1] = 0, 1
    a = np.flatnonzero(side == 0)
    b = np.flatnonzero(side == 1)
    edges = set()
    for _ in range(m):
        u, v = int(rng.choice(a)), int(rng.choice(b))
        edges.add((min(u, v), max(u, v)))
    return GeomInstance(dim, pts, tuple(sorted(edges)), metadata={"name": f"bipartite_{n}_{m}", "seed": int(seed)})


def gen_random_graph(n: int, m: int, seed: int = 0, dim: int = 2) -> GeomInstance:
    rng = np.random.default_rng(seed)
    pts = rng.random((n, dim))
    edges = set()
    for _ in range(m):
        u, v = rng.choice(n, size=2, replace=False)
        edges.add((int(min(u, v)), int(max(u, v))))
    return GeomInstance(dim, pts, tuple(sorted(edges)), metadata={"name": f"graph_{n}_{m}", "seed": int(seed)})


def gen_random_hypergraph(n: int, m: int, seed: int = 0, sizes=(2, 4)) -> GeomInstance:
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    edges = []
    for _ in range(m):
        k = int(rng.integers(sizes[0], min(sizes[1], n) + 1))
        edges.append(tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False))))
    return GeomInstance(2, pts, tuple(edges), metadata={"name": f"hyper_{n}_{m}", "seed": int(seed)})


def gen_fig17() -> GeomInstance:
    """Seven pairs in convex position: q1, q2, q3 clustered far from everything else.

    Vertex 2i is p_{i+1}, vertex 2i+1 is q_{i+1}. The short triangle q1 q2 q3 is
    the best cycle for the first three pairs but a useless approximation
    candidate for all seven.
    """
    deg = {
        "p1": 0, "p2": 40, "p3": -40, "q1": 175, "q2": 180, "q3": 185,
        "p4": 10, "q4": 20, "p5": -10, "q5": -20, "p6": 30, "q6": 50,
        "p7": -30, "q7": -50,
    }
    order = ["p1", "q1", "p2", "q2", "p3", "q3", "p4", "q4", "p5", "q5", "p6", "q6", "p7", "q7"]
    pts = np.round([[math.cos(math.radians(deg[k])), math.sin(math.radians(deg[k]))] for k in order], 12)
    edges = tuple((2 * i, 2 * i + 1) for i in range(7))
    return GeomInstance(2, pts, edges, metadata={"name": "fig17", "convex": True})


def gen_fig3(n: int = 8, seed: int = 3) -> GeomInstance:
    """A plain random matching in the spirit of the introductory example."""
    inst = gen_matching(n, seed)
    return GeomInstance(2, inst.points, inst.edges, metadata={"name": "fig3_matching", "seed": seed})


def uniform_cube_points(n: int, seed: int = 0, dim: int = 3) -> np.ndarray:
    return np.random.default_rng(seed).random((n, dim))
