"""Constructs and verifies the explicit collapse sequences.

The engine never searches for collapses.  It builds the specific
sequences the theory prescribes: the interval peeling of one round-level
complex onto the next (plain and symmetric-group-equivariant), the
staged emptying of a chromatic subdivision, the three-stage retraction
of a subdivision onto a horn, and the two-phase collapse of the iterated
complex onto the iterated subdivision.  Every step's freeness is checked
as it is produced; a generic greedy collapser lives in the test suite as
an independent oracle, not here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import bits
from .complexes import (
    CollapseStep,
    CollapseTrace,
    Complex,
    EMPTY_SIMPLEX,
    Simplex,
    all_permutations,
    apply_step,
    closure,
    collapse,
    dim,
    is_free,
    permute_simplex,
    simplex,
    simplex_key,
    star_interval,
    vertex_color,
    vertex_key,
)
from .errors import AlreadyInNextLevel, DimensionTooLarge, NotFree
from .limits import check_dimension, check_iterated
from .protocol import (
    build_iterated,
    build_wr,
    chi_power,
    chromatic_subdivision,
    sigma_parts,
    standard_complex,
    subdivision_simplices_of,
)


# --- interval machinery -------------------------------------------------------

def completion_vertices(s: Simplex, l: int, n: int) -> frozenset:
    """Vertices closing s to the top of its removal interval.

    Full-view vertices (k, U) for the round union U, over the ids read
    in the round but not contributed by the lagging part (or, when the
    lagging part already covers the union, not among the lagging ids).
    Raises when the formula is empty, which only happens for simplices
    already present one level up.
    """
    s = simplex(s)
    parts = sigma_parts(s, l, n)
    union = parts.round_union
    if parts.lagging_union != union:
        ks = union & ~parts.lagging_union
    else:
        ks = union & ~parts.lagging_ids
    if ks == 0:
        raise AlreadyInNextLevel(
            f"no completion vertices for {sorted(s, key=vertex_key)} at round {l}"
        )
    return frozenset((k, union) for k in bits.ids_of(ks))


def interval_bounds(s: Simplex, l: int, n: int) -> tuple[Simplex, Simplex]:
    """The lower and upper ends of the removal interval through s."""
    s = simplex(s)
    inv = completion_vertices(s, l, n)
    return (s - inv, s | inv)


@dataclass(frozen=True)
class Interval:
    top: Simplex  # representative, equal to its own upper bound
    bottom: Simplex
    members: frozenset


@dataclass(frozen=True)
class IntervalDecomposition:
    n: int
    level: int
    intervals: tuple[Interval, ...]


def _decomposition_sort_key(n: int, l: int):
    def key(iv: Interval):
        lag_dim = dim(sigma_parts(iv.top, l, n).lagging)
        return (-lag_dim, -dim(iv.top), simplex_key(iv.top))

    return key


@lru_cache(maxsize=None)
def interval_decomposition(n: int, l: int) -> IntervalDecomposition:
    """Disjoint intervals covering the round-l complex minus the next one.

    Ordered by decreasing lagging-part dimension, then decreasing
    dimension, then lexicographically.
    """
    check_dimension(n)
    if not 0 <= l <= n - 1:
        raise DimensionTooLarge(f"round index l={l} outside [0, {n - 1}]")
    here = build_wr(n, l).complex
    nxt = build_wr(n, l + 1).complex
    removed = [s for s in here.simplices() if not nxt.contains(s)]
    groups: dict[Simplex, set] = {}
    for s in removed:
        _, top = interval_bounds(s, l, n)
        groups.setdefault(top, set()).add(s)
    intervals = []
    for top, members in groups.items():
        bottom, top_again = interval_bounds(top, l, n)
        assert top_again == top, "representative is not its own upper bound"
        span = top - bottom
        expected = {bottom | frozenset(extra)
                    for r in range(len(span) + 1)
                    for extra in itertools.combinations(tuple(span), r)}
        assert members == expected, "interval members do not fill the span"
        intervals.append(Interval(top, bottom, frozenset(members)))
    intervals.sort(key=_decomposition_sort_key(n, l))
    return IntervalDecomposition(n, l, tuple(intervals))


# --- one-round collapses --------------------------------------------------------

def collapse_round(n: int, l: int) -> CollapseTrace:
    """Peel the round-l complex onto the round-(l+1) complex."""
    decomp = interval_decomposition(n, l)
    source = build_wr(n, l).complex
    target = build_wr(n, l + 1).complex
    current = source
    steps = []
    for iv in decomp.intervals:
        step = CollapseStep((iv.bottom,), iv.members, phase=f"round:l={l}")
        current = apply_step(current, step)
        steps.append(step)
    assert current == target, "round collapse did not reach the next complex"
    return CollapseTrace(source, target, tuple(steps))


def _round_orbits(n: int, l: int) -> tuple[tuple[Interval, tuple[Simplex, ...]], ...]:
    """Group the decomposition intervals into symmetric-group orbits.

    Returns (representative interval, orbit of its bottom face) pairs in
    decomposition order; representatives are the lexicographically least
    orbit members.
    """
    decomp = interval_decomposition(n, l)
    perms = all_permutations(n)
    by_top = {iv.top: iv for iv in decomp.intervals}
    seen: set = set()
    orbits = []
    for iv in decomp.intervals:
        if iv.top in seen:
            continue
        orbit_tops = sorted({permute_simplex(iv.top, g) for g in perms}, key=simplex_key)
        for t in orbit_tops:
            assert t in by_top, "orbit leaves the decomposition"
            seen.add(t)
        rep = by_top[orbit_tops[0]]
        faces = tuple(sorted({permute_simplex(rep.bottom, g) for g in perms},
                             key=simplex_key))
        orbits.append((rep, faces))
    return tuple(orbits)


def equivariant_collapse_round(n: int, l: int) -> CollapseTrace:
    """Like collapse_round, but removing whole orbits in parallel."""
    source = build_wr(n, l).complex
    target = build_wr(n, l + 1).complex
    current = source
    steps = []
    for rep, faces in _round_orbits(n, l):
        removed = set()
        for f in faces:
            removed |= star_interval(current, f)
        step = CollapseStep(faces, frozenset(removed), phase=f"orbit-round:l={l}")
        current = apply_step(current, step)
        steps.append(step)
    assert current == target, "equivariant collapse did not reach the next complex"
    return CollapseTrace(source, target, tuple(steps))


def full_collapse(n: int, *, equivariant: bool = False) -> CollapseTrace:
    """Compose the round collapses from the one-round complex down to
    the chromatic subdivision."""
    source = build_wr(n, 0).complex
    steps: list[CollapseStep] = []
    for l in range(n):
        trace = equivariant_collapse_round(n, l) if equivariant else collapse_round(n, l)
        steps.extend(trace.steps)
    target = build_wr(n, n).complex
    return CollapseTrace(source, target, tuple(steps))


# --- staged subdivision collapses -----------------------------------------------

def _chi_complex_of(base: Simplex) -> Complex:
    return closure(subdivision_simplices_of(base))


def _lagging_part(s: Simplex, full_view: frozenset) -> Simplex:
    return frozenset(v for v in s if v[1] != full_view)


def _full_part(s: Simplex, full_view: frozenset) -> Simplex:
    return frozenset(v for v in s if v[1] == full_view)


def to_void_faces(base: Simplex) -> tuple[tuple[Simplex, str], ...]:
    """Free-face sequence emptying the subdivision of a solid simplex.

    Stage k removes the coface intervals of every all-lagging face of
    dimension d-k; the final stage's face is the empty simplex.
    """
    base = simplex(base)
    d = dim(base)
    full_view = frozenset(base)
    current = _chi_complex_of(base)
    out = []
    for k in range(1, d + 2):
        want = d - k
        if want < 0:
            faces = [EMPTY_SIMPLEX]
        else:
            faces = sorted(
                {s for s in current.simplices()
                 if dim(s) == want and not _full_part(s, full_view)},
                key=simplex_key,
            )
        for face in faces:
            current = collapse(current, face)
            out.append((face, f"void:stage{k}"))
    assert current.void, "staged removal did not reach the void complex"
    return tuple(out)


def to_horn_faces(base: Simplex, p: int) -> tuple[tuple[Simplex, str], ...]:
    """Free-face sequence retracting the subdivision of a solid simplex
    onto the subdivision of its horn at color p.

    Three stages: first peel the simplices whose only full-view vertex
    has color p, then the remaining cofaces of that vertex, then clear
    everything hanging on each remaining full-view part by transporting
    the void sequences of the complementary sub-simplices.
    """
    base = simplex(base)
    d = dim(base)
    full_view = frozenset(base)
    p_vertex = (p, full_view)
    by_color = {vertex_color(v): v for v in base}
    assert p in by_color, "horn color must belong to the base"
    current = _chi_complex_of(base)
    out = []

    def emit(face: Simplex, phase: str):
        nonlocal current
        current = collapse(current, face)
        out.append((face, phase))

    # Stage 1: maximal simplices whose full-view part is exactly {p}.
    for k in range(1, d + 1):
        candidates = sorted(
            {
                _lagging_part(m, full_view)
                for m in current.maximal
                if _full_part(m, full_view) == frozenset({p_vertex})
            },
            key=simplex_key,
        )
        for face in candidates:
            emit(face, f"horn:stage1:k={k}")

    after_stage1 = current

    # Stage 2: remaining simplices through the full-view vertex of p.
    for k in range(1, d + 1):
        want = d - k - 1
        candidates = sorted(
            {
                _lagging_part(s, full_view) | frozenset({p_vertex})
                for s in current.simplices()
                if p_vertex in s and dim(_lagging_part(s, full_view)) == want
            },
            key=simplex_key,
        )
        for face in candidates:
            if current.contains(face):
                emit(face, f"horn:stage2:k={k}")

    # Stage 3: everything hanging on the other full-view parts, cleared
    # by the void sequences of the complementary sub-simplices.
    for k in range(1, d + 1):
        size = d - k + 1
        for colors in sorted(itertools.combinations(sorted(by_color), size)):
            anchor = frozenset((c, full_view) for c in colors)
            if not after_stage1.contains(anchor):
                continue
            sub_base = frozenset(v for v in base if vertex_color(v) not in colors)
            for sub_face, _ in to_void_faces(sub_base):
                face = sub_face | anchor
                if current.contains(face):
                    emit(face, f"horn:stage3:k={k}")

    expected = _chi_complex_of_horn(base, p)
    assert current == expected, "staged removal did not reach the horn subdivision"
    return tuple(out)


def _chi_complex_of_horn(base: Simplex, p: int) -> Complex:
    facets = [base - {v} for v in base if vertex_color(v) != p]
    maximal = []
    for f in facets:
        maximal.extend(subdivision_simplices_of(f))
    return Complex(maximal)


def _mask_lift(face: Simplex) -> Simplex:
    """Relabel a structural subdivision face into mask encoding."""
    out = []
    for color, view in face:
        m = 0
        for u in view:
            m |= u[1]
        out.append((color, m))
    return frozenset(out)


def horn_complex(n: int, p: int) -> Complex:
    """The solid simplex on [n] minus the open star of the facet avoiding p."""
    base = frozenset((i, bits.bit(i)) for i in range(n + 1))
    return Complex([base - {(j, bits.bit(j))} for j in range(n + 1) if j != p])


def chromatic_collapse_void(n: int) -> CollapseTrace:
    """Empty the chromatic subdivision of the standard simplex."""
    check_dimension(n)
    base = next(iter(standard_complex(n).maximal))
    source = build_wr(n, n).complex
    current = source
    steps = []
    for face, phase in to_void_faces(base):
        lifted = _mask_lift(face)
        step = CollapseStep((lifted,), star_interval(current, lifted), phase=phase)
        current = apply_step(current, step)
        steps.append(step)
    assert current.void
    return CollapseTrace(source, current, tuple(steps))


def chromatic_collapse_horn(n: int, p: int) -> CollapseTrace:
    """Retract the chromatic subdivision onto the subdivision of a horn."""
    check_dimension(n)
    if not 0 <= p <= n:
        raise DimensionTooLarge(f"horn color p={p} outside [0, {n}]")
    base = next(iter(standard_complex(n).maximal))
    source = build_wr(n, n).complex
    current = source
    steps = []
    for face, phase in to_horn_faces(base, p):
        lifted = _mask_lift(face)
        step = CollapseStep((lifted,), star_interval(current, lifted), phase=phase)
        current = apply_step(current, step)
        steps.append(step)
    from .protocol import resolve_view_masks

    target = resolve_view_masks(chromatic_subdivision(horn_complex(n, p)).complex)
    assert current == target, "horn collapse did not reach the horn subdivision"
    return CollapseTrace(source, current, tuple(steps))


# --- iterated collapse ------------------------------------------------------------

def _pair_refinement(bottom: Simplex, top: Simplex) -> tuple[tuple[Simplex, Simplex], ...]:
    """Split an interval removal into codimension-one free pairs.

    Fixing one completion vertex v, the pairs (rho, rho+v) for bottom
    <= rho <= top-v, taken by decreasing dimension, remove the interval
    one elementary collapse at a time.
    """
    span = top - bottom
    v = min(span, key=vertex_key)
    rest = tuple(span - {v})
    pairs = []
    for r in range(len(rest), -1, -1):
        for extra in sorted(itertools.combinations(rest, r)):
            rho = bottom | frozenset(extra)
            pairs.append((rho, rho | {v}))
    return tuple(pairs)


def iterated_collapse(n: int, k: int) -> CollapseTrace:
    """Collapse the level-k complex onto the k-fold subdivision.

    Phase one runs the one-round interval orbits inside every copy of
    the one-round complex in parallel.  Phase two transports the
    level-(k-1) collapse through the subdivision, one horn retraction
    per codimension-one pair.
    """
    check_iterated(n, k)
    it = build_iterated(n, k)
    source = it.complex
    current = source
    steps: list[CollapseStep] = []

    prev = it.previous
    copies = sorted(prev.complex.maximal, key=simplex_key)

    def lift_into(copy: Simplex, face: Simplex) -> Simplex:
        if k == 1:
            return face
        by_color = {vertex_color(v): v for v in copy}
        out = []
        for color, view in face:
            seen = frozenset(by_color[j] for j in bits.ids_of(view))
            out.append((color, seen))
        return frozenset(out)

    # Phase one: parallel interval orbits across the one-round copies.
    for l in range(n):
        for idx, (rep, faces) in enumerate(_round_orbits(n, l)):
            lifted = sorted(
                {lift_into(copy, f) for copy in copies for f in faces},
                key=simplex_key,
            )
            removed = set()
            for f in lifted:
                removed |= star_interval(current, f)
            step = CollapseStep(
                tuple(lifted), frozenset(removed), phase=f"parallel:l={l}:orbit={idx}"
            )
            current = apply_step(current, step)
            steps.append(step)

    phase_one_target = (
        chi_power(n, 1) if k == 1 else chromatic_subdivision(prev.complex).complex
    )
    assert current == phase_one_target, "parallel phase missed the subdivision"

    # Phase two: transport the lower-level collapse through the subdivision.
    if k >= 2:
        if k == 2:
            lower_steps = full_collapse(n).steps
            lower_current = build_wr(n, 0).complex
        else:
            lower_trace = iterated_collapse(n, k - 1)
            lower_steps = lower_trace.steps
            lower_current = lower_trace.source
        for lstep in lower_steps:
            for lface in lstep.faces:
                containing = lower_current.maximal_containing(lface)
                assert len(containing) == 1 and containing[0] != lface
                top = containing[0]
                for rho, rho_top in _pair_refinement(lface, top):
                    p_color = vertex_color(next(iter(rho_top - rho)))
                    for face, phase in to_horn_faces(rho_top, p_color):
                        step = CollapseStep(
                            (face,),
                            star_interval(current, face),
                            phase=f"transport:{phase}",
                        )
                        current = apply_step(current, step)
                        steps.append(step)
                lower_current = apply_step(lower_current, CollapseStep((lface,)))

    target = chi_power(n, k)
    assert current == target, "iterated collapse missed the iterated subdivision"
    return CollapseTrace(source, target, tuple(steps))
