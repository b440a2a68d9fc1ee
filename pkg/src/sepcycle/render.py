"""Deterministic SVG drawings of instances and their solutions."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from . import geom
from .hypergraph import BLUE, RED
from .instances_io import GeomInstance

SIZE = 400.0
MARGIN = 20.0
FILL = {RED: "#d62728", BLUE: "#1f77b4", None: "#444444"}


def _num(x: float) -> str:
    s = format(float(x), ".6g")
    return "0" if s == "-0" else s


def render_svg(
    instance: GeomInstance,
    colors: Optional[Sequence[str]] = None,
    cycle=None,
    polyhedron=None,
) -> str:
    """SVG 1.1 text. 3D input is drawn as its xy-projection.

    ``cycle`` is a SimpleCycle or a vertex array; ``polyhedron`` a tube whose
    skeleton is drawn as a polyline.
    """
    P = np.asarray(instance.points, dtype=float)[:, :2].reshape(-1, 2)
    colors = colors if colors is not None else instance.colors
    layers = [P]
    cyc = None
    if cycle is not None:
        cyc = np.asarray(getattr(cycle, "vertices", cycle), dtype=float)[:, :2]
        layers.append(cyc)
    skel = None
    if polyhedron is not None:
        skel = np.asarray(polyhedron.skeleton.vertices, dtype=float)[:, :2]
        layers.append(skel)
    allp = np.concatenate([x for x in layers if len(x)]) if any(len(x) for x in layers) else np.zeros((1, 2))
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    span = max(float(np.max(hi - lo)), 1e-12)
    k = (SIZE - 2 * MARGIN) / span

    def tx(p):
        return _num(MARGIN + (p[0] - lo[0]) * k), _num(SIZE - MARGIN - (p[1] - lo[1]) * k)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(SIZE)}" height="{_num(SIZE)}" '
        f'viewBox="0 0 {_num(SIZE)} {_num(SIZE)}">',
        f'<rect width="{_num(SIZE)}" height="{_num(SIZE)}" fill="white"/>',
        '<g id="edges" stroke="#999999" stroke-width="1" fill="none">',
    ]
    for e in instance.edges:
        if len(e) == 2:
            (x1, y1), (x2, y2) = tx(P[e[0]]), tx(P[e[1]])
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
        else:
            pts = P[list(e)]
            try:
                ring = pts[geom.hull_indices(pts)]
            except Exception:
                ring = pts
            if len(ring) < 3:
                ring = pts
            out.append('<polygon points="' + " ".join(",".join(tx(p)) for p in ring) + '" stroke-dasharray="4 2"/>')
    out.append("</g>")
    if cyc is not None and len(cyc):
        out.append(
            '<polygon id="cycle" fill="none" stroke="#d62728" stroke-width="1.5" points="'
            + " ".join(",".join(tx(p)) for p in cyc)
            + '"/>'
        )
    if skel is not None and len(skel):
        out.append(
            '<polyline id="skeleton" fill="none" stroke="#2ca02c" stroke-width="1.5" points="'
            + " ".join(",".join(tx(p)) for p in skel)
            + '"/>'
        )
    out.append('<g id="points">')
    for i, p in enumerate(P):
        c = FILL[colors[i]] if colors is not None else FILL[None]
        x, y = tx(p)
        out.append(f'<circle cx="{x}" cy="{y}" r="3" fill="{c}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, *args, **kw) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(*args, **kw))
