"""Chromatic simplicial complexes, group actions, and collapses.

Vertices are (color, view) pairs.  A view is either an id bitmask
(level-1 complexes) or a frozenset of lower-level vertices (iterated
complexes).  Complexes store their maximal simplices only; faces are
implicit.  The void complex (no simplices at all) is distinct from the
empty complex (only the empty simplex).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import bits
from .errors import (
    ComplexNotInvariant,
    NonChromaticSimplex,
    NotFree,
    NotGFree,
    NotInComplex,
    OrbitOverlap,
    StepNotFree,
    VoidComplex,
    WrongResidual,
)

Vertex = tuple  # (color, view)
Simplex = frozenset

EMPTY_SIMPLEX: Simplex = frozenset()


def vertex_color(v: Vertex) -> int:
    return v[0]


def vertex_view(v: Vertex):
    return v[1]


def vertex_key(v: Vertex):
    """Deterministic sort key, recursing through iterated views."""
    view = v[1]
    if isinstance(view, int):
        return (v[0], 0, view)
    return (v[0], 1, tuple(sorted(vertex_key(u) for u in view)))


def simplex_key(s: Simplex):
    return tuple(sorted(vertex_key(v) for v in s))


def simplex(vertices: Iterable[Vertex]) -> Simplex:
    return frozenset(tuple(v) for v in vertices)


def is_chromatic(s: Simplex) -> bool:
    return len({vertex_color(v) for v in s}) == len(s)


def dim(s: Simplex) -> int:
    return len(s) - 1


def _antichain(simplices: frozenset) -> frozenset:
    out = []
    for s in simplices:
        if not any(s < t for t in simplices):
            out.append(s)
    return frozenset(out)


class Complex:
    """An abstract simplicial complex given by its maximal simplices."""

    __slots__ = ("maximal", "void", "_by_vertex", "_all")

    def __init__(self, maximal: Iterable[Simplex] = (), void: bool = False):
        filtered = _antichain(frozenset(simplex(m) for m in maximal) - {EMPTY_SIMPLEX})
        self.maximal: frozenset = filtered
        self.void = bool(void) and not filtered
        by_vertex: dict[Vertex, list[Simplex]] = {}
        for m in filtered:
            for v in m:
                by_vertex.setdefault(v, []).append(m)
        self._by_vertex = by_vertex
        self._all = None

    # -- identity ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Complex)
            and self.void == other.void
            and self.maximal == other.maximal
        )

    def __hash__(self) -> int:
        return hash((self.void, self.maximal))

    def __repr__(self) -> str:
        if self.void:
            return "Complex(void)"
        return f"Complex({len(self.maximal)} maximal)"

    # -- queries -------------------------------------------------------------

    def contains(self, s: Simplex) -> bool:
        if self.void:
            return False
        if not s:
            return True
        candidates = self._by_vertex.get(next(iter(s)), ())
        return any(s <= m for m in candidates)

    def maximal_containing(self, s: Simplex) -> tuple[Simplex, ...]:
        if self.void:
            return ()
        if not s:
            return tuple(self.maximal)
        candidates = self._by_vertex.get(next(iter(s)), ())
        return tuple(m for m in candidates if s <= m)

    def simplices(self, *, include_empty: bool = False) -> frozenset:
        """Every simplex of the complex (cached)."""
        if self._all is None:
            out = set()
            for m in self.maximal:
                verts = tuple(m)
                for r in range(1, len(verts) + 1):
                    out.update(frozenset(c) for c in itertools.combinations(verts, r))
            self._all = frozenset(out)
        if include_empty and not self.void:
            return self._all | {EMPTY_SIMPLEX}
        return self._all

    def vertices(self) -> frozenset:
        return frozenset(v for m in self.maximal for v in m)

    def dimension(self) -> int:
        if self.void or not self.maximal:
            return -1
        return max(dim(m) for m in self.maximal)

    def census(self) -> dict[int, int]:
        """Simplex counts per dimension (empty simplex excluded)."""
        out: dict[int, int] = {}
        for s in self.simplices():
            out[dim(s)] = out.get(dim(s), 0) + 1
        return out


VOID_COMPLEX = Complex((), void=True)
EMPTY_COMPLEX = Complex(())


def closure(generators: Iterable[Simplex]) -> Complex:
    """Smallest complex containing the generators; void if there are none."""
    gens = [simplex(g) for g in generators]
    for g in gens:
        if not is_chromatic(g):
            raise NonChromaticSimplex(f"repeated colors in {sorted(g, key=vertex_key)}")
    if not gens:
        return VOID_COMPLEX
    return Complex(gens)


def star_interval(c: Complex, t: Simplex) -> frozenset:
    """All cofaces of t in c, including t itself."""
    t = simplex(t)
    if not c.contains(t):
        raise NotInComplex(f"simplex not in complex: {sorted(t, key=vertex_key)}")
    out = {t}
    for m in c.maximal_containing(t):
        rest = tuple(m - t)
        for r in range(1, len(rest) + 1):
            for extra in itertools.combinations(rest, r):
                out.add(t | frozenset(extra))
    return frozenset(out)


def is_free(c: Complex, t: Simplex) -> bool:
    """True iff exactly one maximal simplex of c properly contains t."""
    t = simplex(t)
    if not c.contains(t):
        raise NotInComplex(f"simplex not in complex: {sorted(t, key=vertex_key)}")
    containing = c.maximal_containing(t)
    return len(containing) == 1 and containing[0] != t


def _remove_intervals(c: Complex, faces: Sequence[Simplex]) -> Complex:
    """Remove every coface of every face; assumes faces are present."""
    if any(not f for f in faces):
        return VOID_COMPLEX
    new_maximal = set()
    for m in c.maximal:
        inside = [f for f in faces if f <= m]
        if not inside:
            new_maximal.add(m)
            continue
        # Maximal subsets of m avoiding all faces: drop one vertex of each.
        survivors = {m}
        for f in inside:
            survivors = {s - {v} for s in survivors if f <= s for v in f} | {
                s for s in survivors if not f <= s
            }
        new_maximal.update(s for s in survivors if s)
    return Complex(new_maximal)


def collapse(c: Complex, t: Simplex) -> Complex:
    """Remove the coface interval of a free simplex."""
    t = simplex(t)
    if not is_free(c, t):
        raise NotFree(f"simplex is not free: {sorted(t, key=vertex_key)}")
    return _remove_intervals(c, (t,))


# --- permutations -----------------------------------------------------------

Permutation = tuple  # images of 0..n


def identity_perm(n: int) -> Permutation:
    return tuple(range(n + 1))


def all_permutations(n: int) -> tuple[Permutation, ...]:
    return tuple(itertools.permutations(range(n + 1)))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p after q."""
    return tuple(p[q[i]] for i in range(len(q)))


def invert(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, img in enumerate(p):
        out[img] = i
    return tuple(out)


def permute_vertex(v: Vertex, p: Permutation) -> Vertex:
    view = v[1]
    if isinstance(view, int):
        return (p[v[0]], bits.permute_mask(view, p))
    return (p[v[0]], frozenset(permute_vertex(u, p) for u in view))


def permute_simplex(s: Simplex, p: Permutation) -> Simplex:
    return frozenset(permute_vertex(v, p) for v in s)


def expand_group(generators: Iterable[Permutation], n: int) -> frozenset:
    """Close a generating set under composition (sizes stay tiny)."""
    elems = {identity_perm(n)}
    gens = [tuple(g) for g in generators]
    frontier = list(gens)
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                c = compose(g, h)
                if c not in elems:
                    elems.add(c)
                    nxt.append(c)
        frontier = nxt
    for g in gens:
        elems.add(g)
    return frozenset(elems)


def apply_permutation(x, p: Permutation):
    """Relabel every id of a simplex or complex through p."""
    if isinstance(x, Complex):
        if x.void:
            return x
        return Complex(permute_simplex(m, p) for m in x.maximal)
    if isinstance(x, frozenset):
        return permute_simplex(x, p)
    if isinstance(x, tuple):
        return permute_vertex(x, p)
    raise TypeError(f"cannot permute {type(x).__name__}")


def orbit_of(s: Simplex, group: Iterable[Permutation]) -> tuple[Simplex, ...]:
    return tuple(sorted({permute_simplex(s, g) for g in group}, key=simplex_key))


def is_g_free(c: Complex, t: Simplex, generators: Iterable[Permutation], n: int) -> bool:
    """Free, with the coface interval disjoint from each orbit-mate's."""
    t = simplex(t)
    group = expand_group(generators, n)
    for g in group:
        if Complex(permute_simplex(m, g) for m in c.maximal).maximal != c.maximal:
            raise ComplexNotInvariant("complex is not invariant under the group")
    if not is_free(c, t):
        return False
    interval = star_interval(c, t)
    for g in group:
        image = permute_simplex(t, g)
        if image == t:
            continue
        if not c.contains(image):
            return False
        if interval & star_interval(c, image):
            return False
    return True


def g_collapse(c: Complex, t: Simplex, generators: Iterable[Permutation], n: int) -> Complex:
    """Collapse the whole orbit of a G-free simplex, one member at a time."""
    t = simplex(t)
    if not is_g_free(c, t, generators, n):
        raise NotGFree(f"simplex is not G-free: {sorted(t, key=vertex_key)}")
    group = expand_group(generators, n)
    current = c
    for member in orbit_of(t, group):
        current = collapse(current, member)
    return current


def euler_characteristic(c: Complex) -> int:
    if c.void:
        raise VoidComplex("the void complex has no Euler characteristic")
    return sum((-1) ** d * count for d, count in c.census().items())


# --- collapse traces ----------------------------------------------------------

@dataclass(frozen=True)
class CollapseStep:
    """One (possibly parallel) collapse: all faces are removed at once.

    `faces` lists every free face of the step; a singleton tuple is a
    plain collapse, a longer one a group orbit or a parallel set.
    `removed` is the union of the coface intervals at the time of the
    step (None when the step comes from deserialized data).
    """

    faces: tuple[Simplex, ...]
    removed: frozenset | None = None
    phase: str = ""

    @property
    def free(self) -> Simplex:
        return self.faces[0]


@dataclass(frozen=True)
class CollapseTrace:
    source: Complex
    target: Complex
    steps: tuple[CollapseStep, ...] = ()


def apply_step(c: Complex, step: CollapseStep) -> Complex:
    """Replay one step, checking freeness and interval disjointness."""
    intervals = []
    for f in step.faces:
        try:
            free = is_free(c, f)
        except NotInComplex as exc:
            raise StepNotFree(f"face missing at its step: {exc}") from exc
        if not free:
            raise StepNotFree(f"face not free at its step: {sorted(f, key=vertex_key)}")
        intervals.append(star_interval(c, f))
    union: set = set()
    for iv in intervals:
        if union & iv:
            raise OrbitOverlap("coface intervals of a parallel step overlap")
        union |= iv
    if step.removed is not None and frozenset(union) != step.removed:
        raise WrongResidual("step removed a different interval than recorded")
    return _remove_intervals(c, step.faces)


def verify_trace(trace: CollapseTrace) -> None:
    """Replay every step from the source and compare with the target."""
    current = trace.source
    for step in trace.steps:
        current = apply_step(current, step)
    if current != trace.target:
        raise WrongResidual("replayed trace does not end at the recorded target")


def parallel_free_and_disjoint(c: Complex, faces: Sequence[Simplex]) -> bool:
    """Check the parallel-collapse side conditions without mutating."""
    try:
        apply_step(c, CollapseStep(tuple(faces)))
    except (StepNotFree, OrbitOverlap):
        return False
    return True
