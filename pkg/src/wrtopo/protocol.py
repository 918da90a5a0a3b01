"""Protocol complexes of the one-round and iterated write/read model.

Level-1 complexes have vertices (id, view mask); simplices are the
sub-profiles of the round-(l+1) view families.  Iterated complexes are
unions of relabeled copies of the one-round complex, one per maximal
simplex one level down; their vertices carry frozensets of lower-level
vertices, and a carrier map records the supporting simplex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import bits
from .complexes import (
    Complex,
    Simplex,
    Vertex,
    closure,
    simplex,
    simplex_key,
    vertex_color,
    vertex_key,
)
from .errors import NonChromaticSimplex, NotAProtocolSimplex, TooShort
from .executions import Profile, round_profiles, view_family
from .limits import check_dimension, check_iterated


def profile_simplex(p: Profile) -> Simplex:
    return frozenset(p.items)


def standard_complex(n: int) -> Complex:
    """The solid simplex on colors [n], vertex (i, {i})."""
    return closure([frozenset((i, bits.bit(i)) for i in range(n + 1))])


@dataclass(frozen=True)
class WrComplex:
    n: int
    level: int
    complex: Complex
    profiles: tuple[Profile, ...]


@lru_cache(maxsize=None)
def build_wr(n: int, l: int) -> WrComplex:
    """The complex whose simplices are sub-profiles of (l+1)-round views."""
    check_dimension(n)
    profiles = view_family(n, l)
    cx = closure([profile_simplex(p) for p in profiles])
    return WrComplex(n, l, cx, profiles)


# --- chromatic subdivision ---------------------------------------------------

def ordered_partitions(items: tuple) -> tuple[tuple[tuple, ...], ...]:
    """All ordered set partitions of the given items."""
    if not items:
        return ((),)
    out = []
    rest_set = list(items)

    def rec(remaining: tuple, acc: tuple):
        if not remaining:
            out.append(acc)
            return
        members = list(remaining)
        for r in range(1, len(members) + 1):
            for block in itertools.combinations(members, r):
                left = tuple(x for x in members if x not in block)
                rec(left, acc + (block,))

    rec(tuple(rest_set), ())
    return tuple(out)


@dataclass(frozen=True)
class Subdivision:
    """A chromatic subdivision with its vertex carrier map."""

    complex: Complex
    carrier: dict  # Vertex -> Simplex one level down

    def carrier_of(self, v: Vertex) -> Simplex:
        return self.carrier[v]


def subdivision_simplices_of(base: Simplex) -> tuple[Simplex, ...]:
    """Maximal simplices of the chromatic subdivision of one base simplex.

    One per ordered partition of the base vertices; the new vertex for v
    in block B_j sees the union of blocks up to and including B_j.
    """
    base_list = tuple(sorted(base, key=vertex_key))
    out = []
    for partition in ordered_partitions(base_list):
        prefix: frozenset = frozenset()
        verts = []
        for block in partition:
            prefix = prefix | frozenset(block)
            for v in block:
                verts.append((vertex_color(v), prefix))
        out.append(frozenset(verts))
    return tuple(out)


def chromatic_subdivision(c: Complex) -> Subdivision:
    """Subdivide every maximal simplex and glue by vertex identity."""
    for m in c.maximal:
        if len({vertex_color(v) for v in m}) != len(m):
            raise NonChromaticSimplex("input complex is not chromatic")
    maximal = []
    for m in sorted(c.maximal, key=simplex_key):
        maximal.extend(subdivision_simplices_of(m))
    cx = Complex(maximal)
    carrier = {v: v[1] for v in cx.vertices()}
    return Subdivision(cx, carrier)


def resolve_view_masks(c: Complex) -> Complex:
    """Rewrite structural views as id masks by union of member views.

    Only valid when the rewrite is injective on vertices, e.g. for the
    subdivision of a solid simplex; used to compare the subdivision of
    the standard simplex against the level-1 protocol complexes.
    """
    mapping: dict[Vertex, Vertex] = {}
    images: dict[Vertex, Vertex] = {}
    for v in c.vertices():
        view = 0
        for u in v[1]:
            view |= u[1]
        image = (v[0], view)
        if image in images and images[image] != v:
            raise NonChromaticSimplex("view resolution is not injective")
        images[image] = v
        mapping[v] = image
    return Complex(frozenset(mapping[v] for v in m) for m in c.maximal)


@lru_cache(maxsize=None)
def chi_power(n: int, k: int) -> Complex:
    """The k-fold chromatic subdivision target, in canonical encoding.

    Level 1 is the mask-encoded complex of immediate-snapshot profiles;
    each further level is the structural subdivision of the previous.
    """
    check_iterated(n, k)
    current = build_wr(n, n).complex
    for _ in range(k - 1):
        current = chromatic_subdivision(current).complex
    return current


# --- matrix form --------------------------------------------------------------

@dataclass(frozen=True)
class MatrixForm:
    """Columns (V_i, I_i): the view and the set of ids holding it."""

    n: int
    columns: tuple[tuple[int, int], ...]  # (view mask, owners mask)


def matrix_form(s: Simplex, n: int) -> MatrixForm:
    """Group vertices by view and order columns compatibly.

    A column may precede another only if its owners are visible in the
    later view; the full-view column always comes last (padded in when
    absent).  Ties are broken by (|view|, lexicographic ids).
    """
    s = simplex(s)
    by_view: dict[int, int] = {}
    for color, view in s:
        if not isinstance(view, int):
            raise NotAProtocolSimplex("matrix form needs mask-encoded views")
        by_view[view] = by_view.get(view, 0) | bits.bit(color)
    full = bits.full_mask(n)
    if full not in by_view:
        by_view[full] = 0
    remaining = dict(by_view)
    columns: list[tuple[int, int]] = []
    while remaining:
        placeable = [
            view
            for view, owners in remaining.items()
            if all(owners & ~other == 0 for other in remaining)
        ]
        if not placeable:
            raise NotAProtocolSimplex("no admissible column order exists")
        view = min(placeable, key=lambda v: (bits.size(v), bits.ids_of(v)))
        columns.append((view, remaining.pop(view)))
    if columns[-1][0] != full:
        raise NotAProtocolSimplex("the full view cannot be ordered last")
    return MatrixForm(n, tuple(columns))


def matrix_to_simplex(m: MatrixForm) -> Simplex:
    verts = []
    for view, owners in m.columns:
        for i in bits.ids_of(owners):
            verts.append((i, view))
    return frozenset(verts)


# --- round splits and the next-level test --------------------------------------

@dataclass(frozen=True)
class SigmaParts:
    """A simplex split at round k by view size against the quota n+1-k."""

    lagging: Simplex  # vertices with |view| < n+1-k
    exact: Simplex  # vertices with |view| = n+1-k
    lagging_union: int  # union of lagging views (id mask)
    round_union: int  # union of lagging and exact views

    @property
    def lagging_ids(self) -> int:
        return bits.mask_of(vertex_color(v) for v in self.lagging)

    @property
    def exact_ids(self) -> int:
        return bits.mask_of(vertex_color(v) for v in self.exact)


def sigma_parts(s: Simplex, k: int, n: int) -> SigmaParts:
    quota = n + 1 - k
    lagging = []
    exact = []
    lag_union = 0
    rnd_union = 0
    for v in s:
        sz = bits.size(v[1])
        if sz < quota:
            lagging.append(v)
            lag_union |= v[1]
            rnd_union |= v[1]
        elif sz == quota:
            exact.append(v)
            rnd_union |= v[1]
    return SigmaParts(frozenset(lagging), frozenset(exact), lag_union, rnd_union)


def in_next_level(s: Simplex, l: int, n: int) -> bool:
    """Membership test for the round-(l+2) complex, given s at round l+1."""
    parts = sigma_parts(s, l, n)
    if parts.lagging_union & parts.exact_ids:
        return False
    return bits.size(parts.lagging_union) < n + 1 - l


# --- iterated complexes ---------------------------------------------------------

@dataclass(frozen=True)
class IteratedComplex:
    k: int
    n: int
    complex: Complex
    carrier: dict  # Vertex -> Simplex of level k-1
    previous: "IteratedComplex | None" = None


def one_round_copy(base: Simplex) -> tuple[Simplex, ...]:
    """Maximal simplices of the one-round complex over one base simplex.

    The base is treated as a standard simplex on its colors; each
    one-round profile relabels into vertices (color, seen base vertices).
    """
    by_color = {vertex_color(v): v for v in base}
    colors = tuple(sorted(by_color))
    out = []
    for rho in round_profiles(bits.full_mask(len(colors) - 1)):
        verts = []
        for local_id, view in rho.items:
            color = colors[local_id]
            seen = frozenset(by_color[colors[j]] for j in bits.ids_of(view))
            verts.append((color, seen))
        out.append(frozenset(verts))
    return tuple(out)


@lru_cache(maxsize=None)
def build_iterated(n: int, k: int) -> IteratedComplex:
    """The level-k complex with carriers into level k-1."""
    check_iterated(n, k)
    if k == 1:
        base = build_wr(n, 0)
        level0 = standard_complex(n)
        carrier = {
            v: frozenset((j, bits.bit(j)) for j in bits.ids_of(v[1]))
            for v in base.complex.vertices()
        }
        prev = IteratedComplex(0, n, level0, {v: v for v in level0.vertices()})
        return IteratedComplex(1, n, base.complex, carrier, prev)
    prev = build_iterated(n, k - 1)
    maximal = []
    for m in sorted(prev.complex.maximal, key=simplex_key):
        maximal.extend(one_round_copy(m))
    cx = Complex(maximal)
    carrier = {v: frozenset(v[1]) for v in cx.vertices()}
    return IteratedComplex(k, n, cx, carrier, prev)
