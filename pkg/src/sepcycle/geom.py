"""Planar and spatial primitives used by every solver in the package.

Points are plain coordinate sequences (tuples or numpy rows). All predicates
take an absolute distance tolerance ``tol``; the solvers derive it from the
instance diameter (see :func:`default_tolerance`).
"""
from __future__ import annotations

import enum
import math
from typing import Sequence

import numpy as np

from .errors import DegenerateInput

REL_TOL = 1e-9


def default_tolerance(points, rel_tol: float = REL_TOL) -> float:
    """Absolute tolerance ``rel_tol * diameter`` (bounding-box diagonal as a cheap proxy)."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return rel_tol
    span = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
    return rel_tol * max(span, 1e-300)


class Location(enum.IntEnum):
    EXTERIOR = -1
    BOUNDARY = 0
    INTERIOR = 1


def orient(a, b, c, tol: float = 0.0) -> int:
    """Sign of the turn a -> b -> c.

    ``tol`` is a distance: ``c`` within ``tol`` of the line ab counts as collinear.
    """
    abx, aby = b[0] - a[0], b[1] - a[1]
    acx, acy = c[0] - a[0], c[1] - a[1]
    cross = abx * acy - aby * acx
    if tol > 0.0:
        scale = math.hypot(abx, aby)
        if abs(cross) <= tol * scale:
            return 0
    if cross > 0:
        return 1
    if cross < 0:
        return -1
    return 0


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


class ConvexPolygon:
    """Strictly convex vertex ring in counterclockwise order.

    The vertex array is read-only; perimeter and diameter are computed once.
    """

    __slots__ = ("vertices", "perimeter", "_diameter")

    def __init__(self, vertices, check: bool = True, tol: float = 0.0):
        v = np.array(vertices, dtype=float).reshape(-1, 2)
        if check:
            if len(v) < 3:
                raise DegenerateInput("convex polygon needs at least 3 vertices")
            k = len(v)
            for i in range(k):
                if orient(v[i], v[(i + 1) % k], v[(i + 2) % k], tol) != 1:
                    raise DegenerateInput("vertices are not strictly convex and counterclockwise")
        v.setflags(write=False)
        self.vertices = v
        self.perimeter = polygon_length(v)
        self._diameter = None

    @property
    def diameter(self) -> float:
        if self._diameter is None:
            self._diameter = diameter(self.vertices)[1] if len(self.vertices) >= 2 else 0.0
        return self._diameter

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"ConvexPolygon({len(self.vertices)} vertices, perimeter={self.perimeter:.6g})"

    @property
    def area(self) -> float:
        return polygon_area(self.vertices)


def convex_hull(points, tol: float = 0.0) -> ConvexPolygon:
    """Monotone-chain hull; collinear vertices are pruned."""
    pts = sorted(set(map(tuple, np.asarray(points, dtype=float).tolist())))
    if len(pts) < 3:
        raise DegenerateInput("need at least 3 distinct points for a hull")

    def half(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2 and orient(chain[-2], chain[-1], p, tol) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    ring = lower[:-1] + upper[:-1]
    if len(ring) < 3:
        raise DegenerateInput("all points are collinear")
    return ConvexPolygon(ring, check=False)


def hull_indices(points, tol: float = 0.0) -> list[int]:
    """Indices of hull vertices of ``points`` in counterclockwise order (collinear pruned)."""
    pts = np.asarray(points, dtype=float)
    order = sorted(range(len(pts)), key=lambda i: (pts[i][0], pts[i][1]))

    def half(seq):
        chain = []
        for i in seq:
            while len(chain) >= 2 and orient(pts[chain[-2]], pts[chain[-1]], pts[i], tol) <= 0:
                chain.pop()
            chain.append(i)
        return chain

    lower = half(order)
    upper = half(reversed(order))
    return lower[:-1] + upper[:-1]


def polygon_length(vertices, closed: bool = True) -> float:
    v = np.asarray(vertices, dtype=float)
    if len(v) < 2:
        return 0.0
    d = np.diff(v, axis=0)
    total = float(np.sum(np.linalg.norm(d, axis=1)))
    if closed:
        total += float(np.linalg.norm(v[0] - v[-1]))
    return total


def polygon_area(vertices) -> float:
    """Signed shoelace area (positive for counterclockwise rings)."""
    v = np.asarray(vertices, dtype=float)
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def dist_point_segment(p, a, b) -> float:
    """Euclidean distance from ``p`` to the closed segment ab (any dimension)."""
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = min(1.0, max(0.0, float((p - a) @ ab) / denom))
    return float(np.linalg.norm(p - (a + t * ab)))


def dist_points_segments(points, a, b) -> np.ndarray:
    """Distance matrix of shape (len(points), len(a)) from points to segments a[j]b[j]."""
    P = np.asarray(points, dtype=float)[:, None, :]
    A = np.asarray(a, dtype=float)[None, :, :]
    B = np.asarray(b, dtype=float)[None, :, :]
    AB = B - A
    denom = np.sum(AB * AB, axis=-1)
    safe = np.where(denom == 0.0, 1.0, denom)
    t = np.sum((P - A) * AB, axis=-1) / safe
    t = np.where(denom == 0.0, 0.0, np.clip(t, 0.0, 1.0))
    foot = A + t[..., None] * AB
    return np.linalg.norm(P - foot, axis=-1)


def segment_distances(a1, b1, a2, b2) -> np.ndarray:
    """Elementwise distance between planar segments a1[i]b1[i] and a2[i]b2[i]."""
    a1, b1, a2, b2 = (np.asarray(x, dtype=float) for x in (a1, b1, a2, b2))

    def cross(o, p, q):
        return (p[:, 0] - o[:, 0]) * (q[:, 1] - o[:, 1]) - (p[:, 1] - o[:, 1]) * (q[:, 0] - o[:, 0])

    o1 = cross(a1, b1, a2)
    o2 = cross(a1, b1, b2)
    o3 = cross(a2, b2, a1)
    o4 = cross(a2, b2, b1)
    crossing = (o1 * o2 < 0) & (o3 * o4 < 0)

    def pdist(p, a, b):
        ab = b - a
        denom = np.sum(ab * ab, axis=1)
        safe = np.where(denom == 0.0, 1.0, denom)
        t = np.clip(np.sum((p - a) * ab, axis=1) / safe, 0.0, 1.0)
        return np.linalg.norm(p - (a + t[:, None] * ab), axis=1)

    d = np.minimum.reduce([pdist(a1, a2, b2), pdist(b1, a2, b2), pdist(a2, a1, b1), pdist(b2, a1, b1)])
    return np.where(crossing, 0.0, d)


def classify_points(points, polygon, tol: float = 0.0) -> np.ndarray:
    """Vectorised :func:`point_vs_polygon`; returns an int array of Location values."""
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    V = np.asarray(getattr(polygon, "vertices", polygon), dtype=float)
    A = V
    B = np.roll(V, -1, axis=0)
    on_boundary = np.min(dist_points_segments(P, A, B), axis=1) <= tol
    px = P[:, 0:1]
    py = P[:, 1:2]
    ax, ay = A[None, :, 0], A[None, :, 1]
    bx, by = B[None, :, 0], B[None, :, 1]
    straddle = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xcross = ax + (py - ay) * (bx - ax) / (by - ay)
    hits = straddle & (px < xcross)
    inside = (np.sum(hits, axis=1) % 2) == 1
    out = np.where(inside, int(Location.INTERIOR), int(Location.EXTERIOR))
    out[on_boundary] = int(Location.BOUNDARY)
    return out


def point_vs_polygon(p, polygon, tol: float = 0.0) -> Location:
    """Ray-casting classification with an explicit boundary band of width ``tol``."""
    return Location(int(classify_points([p], polygon, tol)[0]))


def winding_number(p, polygon) -> int:
    """Winding number of a closed polygon around ``p`` (used as a cross-check oracle)."""
    V = np.asarray(getattr(polygon, "vertices", polygon), dtype=float)
    wn = 0
    k = len(V)
    for i in range(k):
        a, b = V[i], V[(i + 1) % k]
        if a[1] <= p[1]:
            if b[1] > p[1] and _cross(a, b, p) > 0:
                wn += 1
        elif b[1] <= p[1] and _cross(a, b, p) < 0:
            wn -= 1
    return wn


def polygon_is_simple(polygon, tol: float = 0.0) -> bool:
    """Quadratic pairwise edge test.

    Non-adjacent edges must stay farther apart than ``tol``; adjacent edges
    may meet only at their shared vertex.
    """
    V = np.asarray(getattr(polygon, "vertices", polygon), dtype=float)
    k = len(V)
    if k < 3:
        return False
    A = V
    B = np.roll(V, -1, axis=0)
    lengths = np.linalg.norm(B - A, axis=1)
    if np.any(lengths <= tol):
        return False
    # adjacent pairs (i, i+1): the far endpoint of one must not touch the other
    nxt = np.roll(np.arange(k), -1)
    d1 = dist_points_segments(A, A[nxt], B[nxt]).diagonal()
    d2 = dist_points_segments(B[nxt], A, B).diagonal()
    if k == 3:
        if abs(polygon_area(V)) <= tol * float(lengths.max()):
            return False
    elif np.any(d1 <= tol) or np.any(d2 <= tol):
        return False
    if k == 3:
        return True
    i, j = np.triu_indices(k, k=2)
    keep = ~((i == 0) & (j == k - 1))
    i, j = i[keep], j[keep]
    d = segment_distances(A[i], B[i], A[j], B[j])
    return bool(np.all(d > tol))


def widths(polygon, angles) -> np.ndarray:
    """Extent of the vertex projections onto each direction (cos a, sin a)."""
    V = np.asarray(getattr(polygon, "vertices", polygon), dtype=float)
    ang = np.atleast_1d(np.asarray(angles, dtype=float))
    dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    proj = dirs @ V.T
    return proj.max(axis=1) - proj.min(axis=1)


def width(polygon, angle: float) -> float:
    return float(widths(polygon, [angle])[0])


def dist_to_convex(polygon, points) -> np.ndarray:
    """Distance from each point to the filled convex polygon (0 inside).

    Accepts degenerate vertex sets of size 1 or 2 (a point or a segment).
    """
    V = np.asarray(getattr(polygon, "vertices", polygon), dtype=float).reshape(-1, 2)
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    A = V
    B = np.roll(V, -1, axis=0)
    d = np.min(dist_points_segments(P, A, B), axis=1)
    if len(V) >= 3:
        cr = (B[None, :, 0] - A[None, :, 0]) * (P[:, None, 1] - A[None, :, 1]) - (
            B[None, :, 1] - A[None, :, 1]
        ) * (P[:, None, 0] - A[None, :, 0])
        inside = np.all(cr >= 0, axis=1)
        d = np.where(inside, 0.0, d)
    return d


def inflated_contains(polygon, r: float, p, tol: float = 0.0) -> bool:
    """Membership of ``p`` in the Minkowski sum of the polygon and a closed disk of radius r."""
    return bool(dist_to_convex(polygon, [p])[0] <= r + tol)


def diameter(points) -> tuple[tuple[int, int], float]:
    """Farthest pair by exhaustive scan; ties go to the lexicographically smallest pair."""
    P = np.asarray(points, dtype=float)
    n = len(P)
    if n < 2:
        return (0, 0), 0.0
    D = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=-1)
    iu, ju = np.triu_indices(n, k=1)
    vals = D[iu, ju]
    best = int(np.argmax(vals))  # first maximum in row-major (i, j) order
    return (int(iu[best]), int(ju[best])), float(vals[best])


def bbox_diagonal(points) -> float:
    P = np.asarray(points, dtype=float)
    if len(P) == 0:
        return 0.0
    return float(np.linalg.norm(P.max(axis=0) - P.min(axis=0)))


def as_points(points: Sequence) -> np.ndarray:
    P = np.asarray(points, dtype=float)
    if P.ndim != 2:
        raise DegenerateInput("expected a 2-d array of coordinates")
    if not np.all(np.isfinite(P)):
        raise DegenerateInput("coordinates must be finite")
    return P
