"""JSON encodings of executions, profiles, complexes, and traces.

Operation records are {"op": "w"|"r", "p": int, "t": int?}.  A level-1
vertex is [p, [ids...]]; iterated vertices nest: [p, [vertex...]].
Complexes are {"n": ..., "maximal": [[vertex...]...]}, with "void" and
"carrier" fields when they apply.  Traces carry their endpoint
complexes and one record per step; removed sets are recomputed on
replay rather than stored.
"""

from __future__ import annotations

from typing import Any

from . import bits
from .complexes import (
    CollapseStep,
    CollapseTrace,
    Complex,
    Simplex,
    Vertex,
    simplex_key,
    vertex_key,
)
from .errors import WrtopoError
from .executions import (
    IsExecution,
    Operation,
    Profile,
    WrExecution,
    is_write,
    read_op,
    write_op,
)
from .simulator import RunResult, Scheduler


# --- executions ---------------------------------------------------------------

def operation_to_json(op: Operation) -> dict:
    if is_write(op):
        return {"op": "w", "p": op[1]}
    return {"op": "r", "p": op[1], "t": op[2]}


def operation_from_json(data: dict) -> Operation:
    if data["op"] == "w":
        return write_op(int(data["p"]))
    if data["op"] == "r":
        return read_op(int(data["p"]), int(data["t"]))
    raise WrtopoError(f"unknown operation kind {data.get('op')!r}")


def execution_to_json(e: WrExecution) -> list[dict]:
    return [operation_to_json(op) for op in e.order]


def execution_from_json(n: int, data: list) -> WrExecution:
    return WrExecution.from_ops(n, (operation_from_json(d) for d in data))


def is_execution_to_json(x: IsExecution) -> dict:
    return {"n": x.n, "rounds": [execution_to_json(r) for r in x.rounds]}


def is_execution_from_json(data: dict) -> IsExecution:
    n = int(data["n"])
    return IsExecution(n, tuple(execution_from_json(n, r) for r in data["rounds"]))


def profile_to_json(p: Profile) -> dict:
    return {"views": {str(i): list(bits.ids_of(v)) for i, v in p.items}}


def profile_from_json(data: dict) -> Profile:
    return Profile({int(i): bits.mask_of(v) for i, v in data["views"].items()})


# --- complexes ------------------------------------------------------------------

def vertex_to_json(v: Vertex) -> list:
    color, view = v
    if isinstance(view, int):
        return [color, list(bits.ids_of(view))]
    return [color, [vertex_to_json(u) for u in sorted(view, key=vertex_key)]]


def vertex_from_json(data: list) -> Vertex:
    color, view = data
    if all(isinstance(x, int) for x in view):
        return (int(color), bits.mask_of(view))
    return (int(color), frozenset(vertex_from_json(u) for u in view))


def simplex_to_json(s: Simplex) -> list:
    return [vertex_to_json(v) for v in sorted(s, key=vertex_key)]


def simplex_from_json(data: list) -> Simplex:
    return frozenset(vertex_from_json(v) for v in data)


def vertex_label(v: Vertex) -> str:
    color, view = v
    if isinstance(view, int):
        return f"{color}:{''.join(map(str, bits.ids_of(view)))}"
    inner = ",".join(sorted(vertex_label(u) for u in view))
    return f"{color}:({inner})"


def complex_to_json(
    c: Complex,
    n: int | None = None,
    carrier: dict | None = None,
    k: int | None = None,
) -> dict:
    out: dict[str, Any] = {}
    if n is not None:
        out["n"] = n
    if k is not None:
        out["k"] = k
    if c.void:
        out["void"] = True
        out["maximal"] = []
        return out
    out["maximal"] = [simplex_to_json(m) for m in sorted(c.maximal, key=simplex_key)]
    if carrier is not None:
        out["carrier"] = [
            [vertex_to_json(v), simplex_to_json(s)]
            for v, s in sorted(carrier.items(), key=lambda kv: vertex_key(kv[0]))
        ]
    return out


def complex_from_json(data: dict) -> Complex:
    if data.get("void"):
        return Complex((), void=True)
    return Complex(simplex_from_json(m) for m in data["maximal"])


def complex_stats(c: Complex) -> dict:
    from .complexes import euler_characteristic

    if c.void:
        return {"void": True, "census": {}, "maximal": 0}
    census = {str(d): count for d, count in sorted(c.census().items())}
    return {
        "census": census,
        "maximal": len(c.maximal),
        "euler_characteristic": euler_characteristic(c) if c.maximal else 0,
    }


# --- traces ----------------------------------------------------------------------

def step_to_json(step: CollapseStep) -> dict:
    out: dict[str, Any] = {"free": simplex_to_json(step.free), "phase": step.phase}
    if len(step.faces) > 1:
        out["orbit"] = [simplex_to_json(f) for f in step.faces]
    return out


def step_from_json(data: dict) -> CollapseStep:
    free = simplex_from_json(data["free"])
    if "orbit" in data:
        faces = tuple(simplex_from_json(f) for f in data["orbit"])
        if free not in faces:
            faces = (free,) + faces
    else:
        faces = (free,)
    return CollapseStep(faces, None, phase=data.get("phase", ""))


def trace_to_json(trace: CollapseTrace, n: int | None = None) -> dict:
    return {
        "source": complex_to_json(trace.source, n),
        "target": complex_to_json(trace.target, n),
        "steps": [step_to_json(s) for s in trace.steps],
    }


def trace_from_json(data: dict) -> CollapseTrace:
    return CollapseTrace(
        complex_from_json(data["source"]),
        complex_from_json(data["target"]),
        tuple(step_from_json(s) for s in data["steps"]),
    )


# --- simulator --------------------------------------------------------------------

def scheduler_from_json(data: dict) -> Scheduler:
    kind = data.get("kind", "random")
    seed = data.get("seed")
    script = tuple(int(x) for x in data.get("script", ()))
    return Scheduler(kind, seed=seed, script=script)


def scheduler_to_json(s: Scheduler) -> dict:
    out: dict[str, Any] = {"kind": s.kind}
    if s.seed is not None:
        out["seed"] = s.seed
    if s.script:
        out["script"] = list(s.script)
    return out


def run_result_to_json(r: RunResult) -> dict:
    return {
        "execution": is_execution_to_json(r.execution),
        "profile": profile_to_json(r.profile),
        "round_sizes": {str(i): list(sz) for i, sz in r.round_sizes.items()},
    }
