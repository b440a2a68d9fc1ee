"""Convex-position machinery: subpolygon approximation, inflation perimeter,
the candidate-enumeration PTAS and the exhaustive oracle."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import geom
from .cycle2d import SimpleCycle
from .errors import DegenerateInput, TooLarge
from .geom import ConvexPolygon
from .instances_io import GeomInstance, in_strict_convex_position


def size_bound(eps: float) -> int:
    """Vertex budget ceil(10*pi/sqrt(eps) + 14)."""
    return math.ceil(10 * math.pi / math.sqrt(eps) + 14)


@dataclass
class ApproxTrace:
    r_indices: list[int]
    q_indices: list[int]
    alphas: list[float] = field(default_factory=list)
    chord_lengths: list[float] = field(default_factory=list)
    short: list[bool] = field(default_factory=list)
    # False for the closing chord back to the start, which no far vertex cut short
    triggered: list[bool] = field(default_factory=list)

    @property
    def alpha_sum(self) -> float:
        return float(sum(self.alphas))


def _angle(o, a, b) -> float:
    u, v = a - o, b - o
    c = float(u @ v) / (np.linalg.norm(u) * np.linalg.norm(v))
    return math.acos(max(-1.0, min(1.0, c)))


def approx_subpolygon(P: ConvexPolygon, eps: float) -> tuple[ConvexPolygon, ApproxTrace]:
    """Clockwise chord scan from the lexicographically smallest vertex.

    Each phase advances to the first vertex whose chord leaves some skipped
    vertex at distance >= eps*diam(P); that vertex joins R, and the vertex
    just before it joins Q as well.
    """
    V = P.vertices
    m = len(V)
    if m <= 3:
        return P, ApproxTrace(list(range(m)), list(range(m)))
    r = eps * P.diameter
    start = min(range(m), key=lambda i: (V[i][0], V[i][1]))
    cw = [(start - t) % m for t in range(m)]  # clockwise labels -> original indices
    C = V[cw]
    R = [0]
    Qset = {0}
    trace = ApproxTrace([], [])
    i = 0
    while True:
        hit = None
        for j in range(i + 2, m + 1):
            d = geom.dist_points_segments(C[i + 1 : j], [C[i]], [C[j % m]])[:, 0]
            if d.max() >= r:
                hit = j
                break
        end = hit if hit is not None else m
        if end > i + 1:
            sigma = C[end % m] - C[i]
            trace.alphas.append(_angle(C[i], C[i + 1], C[end % m]) if np.linalg.norm(sigma) > 0 else 0.0)
            length = float(np.linalg.norm(sigma))
            trace.chord_lengths.append(length)
            trace.short.append(length <= math.sqrt(eps) * P.diameter)
            trace.triggered.append(hit is not None)
        if hit is None:
            break
        R.append(hit % m)
        Qset.update({hit - 1, hit % m})
        if hit == m:
            break
        i = hit
    q = sorted({cw[k] for k in Qset})
    while len(q) < 3:
        d = geom.dist_to_convex(V[q], V)
        d[q] = -1.0
        q = sorted(q + [int(np.argmax(d))])
    trace.r_indices = [cw[k] for k in dict.fromkeys(R)]
    trace.q_indices = q
    return ConvexPolygon(V[q], check=False), trace


def verify_approx(P: ConvexPolygon, Q, eps: float, tol: float = 1e-12) -> bool:
    """Every vertex of P lies within eps*diam(P) of conv(Q)."""
    QV = getattr(Q, "vertices", Q)
    d = geom.dist_to_convex(QV, P.vertices)
    return bool(np.all(d <= eps * P.diameter + tol * max(P.diameter, 1.0)))


def _reach(V: np.ndarray, r: float) -> list[int]:
    """reach[i] = largest step s such that chord (i, i+s) covers the skipped vertices."""
    m = len(V)
    out = []
    for i in range(m):
        s = 1
        while s + 1 < m:
            j = i + s + 1
            mid = V[[(i + t) % m for t in range(1, s + 1)]]
            if geom.dist_points_segments(mid, [V[i]], [V[j % m]])[:, 0].max() > r:
                break
            s += 1
        out.append(s)
    return out


def min_subpolygon_size(P: ConvexPolygon, eps: float, limit: int = 2000, exhaustive_limit: int = 50000) -> int:
    """Smallest |Q| found by exhaustive small subsets, else best greedy arc cover."""
    V = P.vertices
    m = len(V)
    if m > limit:
        raise TooLarge(f"{m} vertices exceed limit {limit}")
    r = eps * P.diameter
    tol = 1e-12 * max(P.diameter, 1.0)
    for size in range(3, m + 1):
        if math.comb(m, size) > exhaustive_limit:
            break
        for combo in itertools.combinations(range(m), size):
            if np.all(geom.dist_to_convex(V[list(combo)], V) <= r + tol):
                return size
    reach = _reach(V, r)
    best = m
    for s0 in range(m):
        pos, count = 0, 0
        while pos < m:
            pos += reach[(s0 + pos) % m]
            count += 1
        best = min(best, max(count, 3))
    return best


def inflated_perimeter(Q: ConvexPolygon, r: float) -> float:
    return Q.perimeter + 2 * math.pi * r


def minkowski_disk(Q, r: float, k: int = 4096) -> np.ndarray:
    """Vertices of conv(Q) + (regular k-gon inscribed in the disk of radius r), by edge merging."""
    A = np.asarray(getattr(Q, "vertices", Q), dtype=float)
    ang = np.arange(k) * 2 * math.pi / k
    B = r * np.stack([np.cos(ang), np.sin(ang)], axis=1)

    def from_bottom(X):
        s = min(range(len(X)), key=lambda i: (X[i][1], X[i][0]))
        return np.roll(X, -s, axis=0)

    A, B = from_bottom(A), from_bottom(B)
    ea = np.roll(A, -1, axis=0) - A
    eb = np.roll(B, -1, axis=0) - B
    ta = np.mod(np.arctan2(ea[:, 1], ea[:, 0]), 2 * math.pi)
    tb = np.mod(np.arctan2(eb[:, 1], eb[:, 0]), 2 * math.pi)
    edges = np.concatenate([ea, eb])
    order = np.argsort(np.concatenate([ta, tb]), kind="stable")
    pts = A[0] + B[0] + np.concatenate([[[0.0, 0.0]], np.cumsum(edges[order], axis=0)[:-1]])
    return pts


def width_integral(Q, samples: int = 4096) -> float:
    """Midpoint rule for the integral of the directional width over [0, pi)."""
    if samples < 64:
        raise ValueError("samples >= 64")
    h = math.pi / samples
    ang = (np.arange(samples) + 0.5) * h
    total = 0.0
    for chunk in np.array_split(ang, max(1, samples // 8192)):
        total += float(np.sum(geom.widths(Q, chunk)))
    return total * h


# ---------------------------------------------------------------- tours


@dataclass(frozen=True, eq=False)
class ConvexTour:
    selection: tuple[int, ...]  # one vertex per pair, in pair order
    cycle: SimpleCycle
    candidates: int = 0

    @property
    def length(self) -> float:
        return self.cycle.length


def _check_convex(instance: GeomInstance):
    if instance.dim != 2 or not instance.is_matching:
        raise DegenerateInput("convex solvers expect a planar matching")
    if not in_strict_convex_position(instance.points):
        raise DegenerateInput("points are not in strictly convex position")


def _hull_position(instance: GeomInstance) -> np.ndarray:
    P = instance.points
    order = geom.hull_indices(P) if len(P) >= 3 else list(range(len(P)))
    pos = np.empty(len(P), dtype=int)
    pos[order] = np.arange(len(order))
    return pos


def _tour_lengths(P: np.ndarray, pos: np.ndarray, sel: np.ndarray) -> np.ndarray:
    """Perimeter of the hull of each row of vertex ids (rows are in convex position)."""
    if sel.shape[1] == 0:
        return np.zeros(len(sel))
    order = np.argsort(pos[sel], axis=1)
    ids = np.take_along_axis(sel, order, axis=1)
    X = P[ids]
    return np.sum(np.linalg.norm(np.roll(X, -1, axis=1) - X, axis=2), axis=1)


def _make_tour(P, pos, selection, candidates=0) -> ConvexTour:
    sel = list(selection)
    ring = sorted(sel, key=lambda v: pos[v])
    V = P[ring]
    return ConvexTour(tuple(int(v) for v in sel), SimpleCycle(V, 0.0, geom.polygon_area(V)), candidates)


def oracle_convex(instance: GeomInstance, limit: int = 16) -> ConvexTour:
    """Exhaustive minimum over all 2**n one-point-per-pair selections."""
    _check_convex(instance)
    E = np.asarray(instance.edges)
    n = len(E)
    if n > limit:
        raise TooLarge(f"{n} pairs exceed oracle limit {limit}")
    P = instance.points
    pos = _hull_position(instance)
    masks = np.arange(1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)[None, :]) & 1
    sel = np.where(bits == 0, E[None, :, 0], E[None, :, 1])
    lengths = _tour_lengths(P, pos, sel)
    k = int(np.argmin(lengths))
    return _make_tour(P, pos, sel[k], len(masks))


def _colex_combinations(n: int, i: int):
    return sorted(itertools.combinations(range(n), i), key=lambda c: c[::-1])


def ptas_a1(instance: GeomInstance, eps: float, rel_tol: float = geom.REL_TOL) -> ConvexTour:
    """Candidate enumeration with inflated-hull feasibility (``eps`` is the internal parameter).

    Subsets of at most ceil(10*pi/sqrt(eps)+14) pairs in colex order, endpoint
    selections in binary-counter order, first minimum wins.
    """
    if not 0 < eps <= 1:
        raise ValueError("0 < eps <= 1")
    _check_convex(instance)
    E = np.asarray(instance.edges)
    n = len(E)
    P = instance.points
    pos = _hull_position(instance)
    tol = geom.default_tolerance(P, rel_tol)
    m = len(P)
    A = np.repeat(np.arange(m), m)
    B = np.tile(np.arange(m), m)
    # seg[a, b, p] = distance from point p to segment (a, b)
    seg = geom.dist_points_segments(P, P[A], P[B]).T.reshape(m, m, m)
    dpt = np.linalg.norm(P[:, None] - P[None, :], axis=-1)
    k = min(size_bound(eps), n)
    best_len, best_sel, examined = math.inf, None, 0
    for i in range(1, k + 1):
        combos = np.array(_colex_combinations(n, i), dtype=int)  # (C, i)
        masks = np.arange(1 << i, dtype=np.int64)
        bits = (masks[:, None] >> np.arange(i)[None, :]) & 1  # (M, i)
        pairs = np.repeat(combos, len(masks), axis=0)  # (N, i)
        bit = np.tile(bits, (len(combos), 1))
        qv = np.where(bit == 0, E[pairs, 0], E[pairs, 1])  # candidate vertex ids
        examined += len(qv)
        order = np.argsort(pos[qv], axis=1)
        ring = np.take_along_axis(qv, order, axis=1)
        nxt = np.roll(ring, -1, axis=1)
        dist = seg[ring, nxt].min(axis=1)  # (N, m)
        diam = dpt[ring[:, :, None], ring[:, None, :]].reshape(len(ring), -1).max(axis=1)
        rad = eps * (1 + 2 * eps) * diam
        enclosed = dist <= rad[:, None] + tol
        enc_p = enclosed[:, E[:, 0]]
        enc_q = enclosed[:, E[:, 1]]
        feasible = np.all(enc_p | enc_q, axis=1)
        if not feasible.any():
            continue
        # pairs in the subset keep their own candidate point
        in_sub = np.zeros((len(qv), n), dtype=bool)
        own = np.zeros((len(qv), n), dtype=int)
        rows = np.arange(len(qv))[:, None]
        in_sub[rows, pairs] = True
        own[rows, pairs] = qv
        lo = np.minimum(E[:, 0], E[:, 1])[None, :]
        hi = np.maximum(E[:, 0], E[:, 1])[None, :]
        enc_lo = np.where(E[None, :, 0] == lo, enc_p, enc_q)
        keep = np.where(in_sub, own, np.where(enc_lo, lo, hi))
        idx = np.flatnonzero(feasible)
        lengths = _tour_lengths(P, pos, keep[idx])
        j = int(np.argmin(lengths))
        if lengths[j] < best_len:
            best_len, best_sel = float(lengths[j]), keep[idx[j]]
    return _make_tour(P, pos, best_sel, examined)


def ptas(instance: GeomInstance, eps: float, **kw) -> ConvexTour:
    """(1+eps)-approximation: runs the enumeration with eps/4."""
    return ptas_a1(instance, eps / 4, **kw)


def a1_candidate_feasible(instance: GeomInstance, candidate, eps: float, rel_tol: float = geom.REL_TOL) -> bool:
    """Whether conv(Q) + B(eps(1+2eps)diam(Q)) meets every pair, Q given as vertex ids."""
    P = instance.points
    Q = P[list(candidate)]
    diam = geom.diameter(Q)[1]
    pos = _hull_position(instance)
    ring = sorted(candidate, key=lambda v: pos[v])
    d = geom.dist_points_segments(P, P[ring], P[np.roll(ring, -1)]).min(axis=1)
    enclosed = d <= eps * (1 + 2 * eps) * diam + geom.default_tolerance(P, rel_tol)
    return all(enclosed[p] or enclosed[q] for p, q in instance.edges)
