"""DOT and OFF exporters for low-dimensional complexes.

DOT renders the 1-skeleton with labeled nodes.  OFF places vertices by
a recursive barycentric layout: color corners on the unit circle, each
vertex at the centroid of what it saw, nudged toward its own color.
"""

from __future__ import annotations

import math

from . import bits
from .complexes import Complex, Vertex, simplex_key, vertex_key
from .errors import VoidComplex
from .jsonio import vertex_label

PULL = 0.45


def _corners(n: int) -> list[tuple[float, float]]:
    out = []
    for i in range(n + 1):
        angle = math.pi / 2 + 2 * math.pi * i / (n + 1)
        out.append((math.cos(angle), math.sin(angle)))
    return out


def _position(v: Vertex, corners, cache: dict) -> tuple[float, float]:
    if v in cache:
        return cache[v]
    color, view = v
    if isinstance(view, int):
        pts = [corners[j] for j in bits.ids_of(view)]
        own = corners[color]
    else:
        pts = [_position(u, corners, cache) for u in view]
        own = next(
            _position(u, corners, cache) for u in view if u[0] == color
        )
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    pos = (cx + PULL * (own[0] - cx), cy + PULL * (own[1] - cy))
    cache[v] = pos
    return pos


def _ambient(c: Complex) -> int:
    top = 0
    for v in c.vertices():
        view = v[1]
        while not isinstance(view, int):
            view = next(iter(view))[1]
        top = max(top, v[0], max(bits.ids_of(view), default=0))
    return top


def to_dot(c: Complex) -> str:
    if c.void:
        raise VoidComplex("nothing to export")
    vertices = sorted(c.vertices(), key=vertex_key)
    index = {v: i for i, v in enumerate(vertices)}
    lines = ["graph complex {", "  node [shape=circle];"]
    for v in vertices:
        lines.append(f'  v{index[v]} [label="{vertex_label(v)}"];')
    edges = {s for s in c.simplices() if len(s) == 2}
    for e in sorted(edges, key=simplex_key):
        a, b = sorted(e, key=vertex_key)
        lines.append(f"  v{index[a]} -- v{index[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_off(c: Complex) -> str:
    if c.void:
        raise VoidComplex("nothing to export")
    if c.dimension() > 2:
        raise VoidComplex("OFF export covers dimensions up to 2")
    vertices = sorted(c.vertices(), key=vertex_key)
    index = {v: i for i, v in enumerate(vertices)}
    corners = _corners(_ambient(c))
    cache: dict = {}
    faces = sorted((m for m in c.maximal if len(m) >= 2), key=simplex_key)
    lines = ["OFF", f"{len(vertices)} {len(faces)} 0"]
    for v in vertices:
        x, y = _position(v, corners, cache)
        lines.append(f"{x:.6f} {y:.6f} 0.0")
    for f in faces:
        ids = [index[v] for v in sorted(f, key=vertex_key)]
        lines.append(f"{len(ids)} " + " ".join(map(str, ids)))
    return "\n".join(lines) + "\n"
