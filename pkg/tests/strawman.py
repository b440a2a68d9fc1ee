"""Test-only baseline: confine the cycle to the smallest square around some transversal."""
import itertools

import numpy as np

from sepcycle.hypergraph import bipartition


def _transversals(instance):
    """Minimal vertex sets meeting every edge, by brute force."""
    n = instance.n
    for size in range(1, n + 1):
        found = False
        for combo in itertools.combinations(range(n), size):
            s = set(combo)
            if all(s & set(e) for e in instance.edges):
                found = True
                yield combo
        if found:
            return


def min_square(instance):
    """Smallest axis-aligned square (lo, side) enclosing a transversal."""
    best = None
    for t in _transversals(instance):
        P = instance.points[list(t)]
        lo, hi = P.min(axis=0), P.max(axis=0)
        side = float(np.max(hi - lo))
        if best is None or side < best[1]:
            best = (lo, side)
    return best


def strawman_solves(instance) -> bool:
    """True iff a separating cycle can live inside the min square.

    A cycle inside the square can only enclose points in the square, so some
    proper coloring must put one whole class of every component inside it.
    """
    col = bipartition(instance.hypergraph)
    lo, side = min_square(instance)
    inside = np.all((instance.points >= lo - 1e-12) & (instance.points <= lo + side + 1e-12), axis=1)
    comp = np.asarray(col.component)
    touched = {comp[v] for e in instance.edges for v in e}
    for k in touched:
        members = np.flatnonzero(comp == k)
        reds = [v for v in members if col.colors[v] == "R"]
        blues = [v for v in members if col.colors[v] == "B"]
        if not (all(inside[reds]) or all(inside[blues])):
            return False
    return True
