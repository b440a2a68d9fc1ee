"""Components, bipartiteness and 2-colorings of (hyper)graphs."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import Infeasible, NotAGraph, ValidationError

RED = "R"
BLUE = "B"


@dataclass(frozen=True)
class Hypergraph:
    n_vertices: int
    edges: tuple[tuple[int, ...], ...]

    def __init__(self, n_vertices: int, edges: Iterable[Iterable[int]]):
        norm = []
        for k, e in enumerate(edges):
            e = tuple(int(v) for v in e)
            if len(e) < 2:
                raise ValidationError(f"edge {k}: singleton edge")
            if len(set(e)) != len(e):
                raise ValidationError(f"edge {k}: repeated vertex")
            if min(e) < 0 or max(e) >= n_vertices:
                raise ValidationError(f"edge {k}: vertex index out of range")
            norm.append(e)
        object.__setattr__(self, "n_vertices", int(n_vertices))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def is_graph(self) -> bool:
        return all(len(e) == 2 for e in self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def adjacency(self) -> list[list[int]]:
        """Neighbour lists; two vertices are adjacent when they share an edge."""
        adj = [set() for _ in range(self.n_vertices)]
        for e in self.edges:
            for u in e:
                adj[u].update(v for v in e if v != u)
        return [sorted(s) for s in adj]


@dataclass(frozen=True)
class Coloring:
    colors: tuple[str, ...]
    component: tuple[int, ...] = ()
    flipped: tuple[bool, ...] = ()

    def reds(self) -> list[int]:
        return [i for i, c in enumerate(self.colors) if c == RED]

    def blues(self) -> list[int]:
        return [i for i, c in enumerate(self.colors) if c == BLUE]

    def is_valid_for(self, h: Hypergraph) -> bool:
        return not monochromatic_edges(h, self.colors)

    def flip_components(self, which: Iterable[int]) -> "Coloring":
        which = set(which)
        cols = tuple(
            (BLUE if c == RED else RED) if self.component[i] in which else c
            for i, c in enumerate(self.colors)
        )
        flipped = tuple(f ^ (k in which) for k, f in enumerate(self.flipped))
        return Coloring(cols, self.component, flipped)


def monochromatic_edges(h: Hypergraph, colors: Sequence[str]) -> list[int]:
    return [k for k, e in enumerate(h.edges) if len({colors[v] for v in e}) == 1]


def _components(n: int, adj: list[list[int]]) -> list[int]:
    label = [-1] * n
    k = 0
    for s in range(n):
        if label[s] != -1:
            continue
        label[s] = k
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if label[v] == -1:
                    label[v] = k
                    stack.append(v)
        k += 1
    return label


def connected_components(graph: Hypergraph) -> list[int]:
    """Component label per vertex, numbered by lowest member index."""
    if not graph.is_graph:
        raise NotAGraph("connected_components expects edges of size 2")
    return _components(graph.n_vertices, graph.adjacency())


def hypergraph_components(h: Hypergraph) -> list[int]:
    return _components(h.n_vertices, h.adjacency())


def bipartition(graph: Hypergraph) -> Coloring:
    """BFS parity coloring; the lowest-index vertex of each component is red.

    Raises :class:`Infeasible` with an odd-cycle witness when some component
    is not bipartite.
    """
    if not graph.is_graph:
        raise NotAGraph("bipartition expects edges of size 2")
    n = graph.n_vertices
    adj = graph.adjacency()
    comp = [-1] * n
    dist = [-1] * n
    parent = [-1] * n
    k = 0
    for s in range(n):
        if comp[s] != -1:
            continue
        comp[s] = k
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if comp[v] == -1:
                    comp[v] = k
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif dist[v] % 2 == dist[u] % 2:
                    raise Infeasible("graph has an odd cycle", _odd_cycle(u, v, parent, dist))
        k += 1
    colors = tuple(RED if d % 2 == 0 else BLUE for d in dist)
    return Coloring(colors, tuple(comp), (False,) * k)


def _odd_cycle(u: int, v: int, parent: list[int], dist: list[int]) -> list[int]:
    # walk both BFS-tree paths up to their lowest common ancestor
    pu, pv = [u], [v]
    a, b = u, v
    while dist[a] > dist[b]:
        a = parent[a]
        pu.append(a)
    while dist[b] > dist[a]:
        b = parent[b]
        pv.append(b)
    while a != b:
        a = parent[a]
        b = parent[b]
        pu.append(a)
        pv.append(b)
    return pu + pv[-2::-1]


def two_color_exact(h: Hypergraph) -> Optional[Coloring]:
    """Backtracking 2-coloring with propagation on almost-monochromatic edges.

    Vertices are branched in order of descending degree (ties by index).
    Returns None when no proper coloring exists.
    """
    n = h.n_vertices
    edges = h.edges
    inc = [[] for _ in range(n)]
    for k, e in enumerate(edges):
        for v in e:
            inc[v].append(k)
    deg = h.degrees()
    order = sorted(range(n), key=lambda v: (-deg[v], v))
    color = [None] * n

    # Per edge: count of red, count of blue.
    red_cnt = [0] * len(edges)
    blue_cnt = [0] * len(edges)
    size = [len(e) for e in edges]

    def assign(v, c, trail):
        color[v] = c
        trail.append(v)
        for k in inc[v]:
            if c == RED:
                red_cnt[k] += 1
            else:
                blue_cnt[k] += 1

    def unassign(v):
        c = color[v]
        for k in inc[v]:
            if c == RED:
                red_cnt[k] -= 1
            else:
                blue_cnt[k] -= 1
        color[v] = None

    def propagate(start, trail) -> bool:
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for k in inc[v]:
                r, b, s = red_cnt[k], blue_cnt[k], size[k]
                if r == s or b == s:
                    return False
                if r + b == s - 1 and (r == 0 or b == 0):
                    forced = BLUE if b == 0 else RED
                    for w in edges[k]:
                        if color[w] is None:
                            assign(w, forced, trail)
                            queue.append(w)
                            break
        return True

    def search(pos) -> bool:
        while pos < n and color[order[pos]] is not None:
            pos += 1
        if pos == n:
            return True
        v = order[pos]
        # the first branching vertex only needs one color (flip symmetry)
        choices = (RED,) if pos == 0 else (RED, BLUE)
        for c in choices:
            trail = []
            assign(v, c, trail)
            if propagate(v, trail) and search(pos + 1):
                return True
            for w in reversed(trail):
                unassign(w)
        return False

    if not search(0):
        return None
    comp = hypergraph_components(h)
    k = max(comp) + 1 if comp else 0
    return Coloring(tuple(color), tuple(comp), (False,) * k)


def two_color_random(h: Hypergraph, max_restarts: int = 1000, rng_seed=0) -> Optional[Coloring]:
    """Independent uniform colorings until one has no monochromatic edge."""
    sizes = {len(e) for e in h.edges}
    if len(sizes) > 1:
        raise ValidationError("two_color_random expects a uniform hypergraph")
    rng = np.random.default_rng(rng_seed)
    n = h.n_vertices
    E = [np.asarray(e) for e in h.edges]
    for _ in range(max_restarts):
        bits = rng.integers(0, 2, size=n)
        if all(bits[e].min() != bits[e].max() for e in E):
            cols = tuple(RED if b == 0 else BLUE for b in bits)
            comp = hypergraph_components(h)
            return Coloring(cols, tuple(comp), (False,) * (max(comp) + 1 if comp else 0))
    return None


def max_edge_dependency(h: Hypergraph) -> int:
    """Largest number of other edges meeting a single edge."""
    sets = [set(e) for e in h.edges]
    best = 0
    for i, a in enumerate(sets):
        cnt = sum(1 for j, b in enumerate(sets) if j != i and a & b)
        best = max(best, cnt)
    return best


def lll_condition(h: Hypergraph) -> bool:
    """Local-lemma test e*(D+1) <= 2**(k-1) with k the minimum edge size."""
    if not h.edges:
        return True
    k = min(len(e) for e in h.edges)
    return math.e * (max_edge_dependency(h) + 1) <= 2 ** (k - 1)


def exhaustive_two_colorable(h: Hypergraph) -> bool:
    """2**n enumeration; test oracle for small instances."""
    n = h.n_vertices
    if n == 0:
        return True
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(len(masks), dtype=bool)
    for e in h.edges:
        bits = np.stack([(masks >> v) & 1 for v in e])
        ok &= bits.min(axis=0) != bits.max(axis=0)
        if not ok.any():
            return False
    return bool(ok.any())
