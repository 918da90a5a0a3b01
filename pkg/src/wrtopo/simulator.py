"""Executable model of the recursive write/read scan protocol.

Each process walks a sequence of disjoint register arrays.  On array k
it writes its id, reads all n+1 cells one by one, and returns its view
once the view holds n+1-k ids; otherwise it descends to array k+1.  A
scheduler decides which process performs its next single register
operation, so runs cover exactly the interleavings of the one-round
model, layer by layer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import bits
from .errors import DimensionTooLarge, IncompleteScript
from .executions import (
    IsExecution,
    Operation,
    Profile,
    WrExecution,
    read_op,
    write_op,
)
from .limits import EXHAUSTIVE_MAX_N, check_dimension

EXHAUSTIVE = "exhaustive"
RANDOM = "random"
SCRIPTED = "scripted"


@dataclass(frozen=True)
class Scheduler:
    kind: str
    seed: int | None = None
    script: tuple[int, ...] = ()

    @classmethod
    def scripted(cls, script) -> "Scheduler":
        return cls(SCRIPTED, script=tuple(script))

    @classmethod
    def seeded(cls, seed: int) -> "Scheduler":
        return cls(RANDOM, seed=seed)


@dataclass(frozen=True)
class RunResult:
    execution: IsExecution
    profile: Profile
    round_sizes: dict[int, tuple[int, ...]]


@dataclass
class _ProcessState:
    layer: int = 0
    wrote: bool = False
    reads_done: int = 0
    view: int = 0
    read_order: tuple[int, ...] = ()
    done: bool = False
    final_view: int = 0
    sizes: list[int] = field(default_factory=list)


class _Machine:
    """Registers plus per-process control state; one atomic step at a time."""

    def __init__(self, n: int):
        self.n = n
        self.memory = [[None] * (n + 1) for _ in range(n + 1)]
        self.procs = [_ProcessState() for _ in range(n + 1)]
        self.ops_by_layer: list[list[Operation]] = [[] for _ in range(n + 1)]

    def enabled(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.procs) if not p.done)

    def all_done(self) -> bool:
        return all(p.done for p in self.procs)

    def step(self, i: int, rng: random.Random | None = None) -> None:
        p = self.procs[i]
        assert not p.done
        if not p.wrote:
            self.memory[p.layer][i] = i
            self.ops_by_layer[p.layer].append(write_op(i))
            p.wrote = True
            p.reads_done = 0
            p.view = 0
            if rng is not None:
                order = list(range(self.n + 1))
                rng.shuffle(order)
                p.read_order = tuple(order)
            else:
                p.read_order = tuple(range(self.n + 1))
            return
        j = p.read_order[p.reads_done]
        value = self.memory[p.layer][j]
        self.ops_by_layer[p.layer].append(read_op(i, j))
        if value is not None:
            p.view |= bits.bit(value)
        p.reads_done += 1
        if p.reads_done == self.n + 1:
            p.sizes.append(bits.size(p.view))
            if bits.size(p.view) == self.n + 1 - p.layer:
                p.done = True
                p.final_view = p.view
            else:
                p.layer += 1
                p.wrote = False

    def result(self) -> RunResult:
        rounds = []
        for ops in self.ops_by_layer:
            if not ops:
                break
            rounds.append(WrExecution.from_ops(self.n, tuple(ops)))
        execution = IsExecution(self.n, tuple(rounds))
        profile = Profile({i: p.final_view for i, p in enumerate(self.procs)})
        sizes = {i: tuple(p.sizes) for i, p in enumerate(self.procs)}
        return RunResult(execution, profile, sizes)


def run(n: int, scheduler: Scheduler) -> RunResult:
    """Drive every process to termination under the given scheduler."""
    check_dimension(n)
    machine = _Machine(n)
    if scheduler.kind == SCRIPTED:
        for i in scheduler.script:
            if machine.all_done():
                raise IncompleteScript("script continues after termination")
            if i not in machine.enabled():
                raise IncompleteScript(f"scheduled process {i} is not enabled")
            machine.step(i)
        if not machine.all_done():
            raise IncompleteScript("script ended before every process terminated")
    elif scheduler.kind == RANDOM:
        rng = random.Random(scheduler.seed)
        while not machine.all_done():
            machine.step(rng.choice(machine.enabled()), rng)
    elif scheduler.kind == EXHAUSTIVE:
        while not machine.all_done():
            machine.step(machine.enabled()[0])
    else:
        raise IncompleteScript(f"unknown scheduler kind {scheduler.kind!r}")
    return machine.result()


def run_to_completion_script(n: int, order) -> tuple[int, ...]:
    """A script running each listed process to termination in turn."""
    steps_per_layer = n + 2
    script = []
    for i in order:
        script.extend([i] * (steps_per_layer * (n + 1)))
    return _trim_script(n, tuple(script))


def _trim_script(n: int, script: tuple[int, ...]) -> tuple[int, ...]:
    machine = _Machine(n)
    used = []
    for i in script:
        if machine.all_done():
            break
        if i not in machine.enabled():
            continue
        machine.step(i)
        used.append(i)
    if not machine.all_done():
        raise IncompleteScript("script ended before every process terminated")
    return tuple(used)


def _state_key(machine: _Machine):
    mem = tuple(tuple(layer) for layer in machine.memory)
    procs = tuple(
        (p.layer, p.wrote, p.reads_done, p.view, p.done, p.final_view)
        for p in machine.procs
    )
    return (mem, procs)


def run_exhaustive(n: int) -> tuple[Profile, ...]:
    """Profiles over every schedule, deduplicated via frontier states."""
    check_dimension(n, bound=EXHAUSTIVE_MAX_N)
    profiles: set[Profile] = set()
    seen_states: set = set()
    root = _Machine(n)

    def clone(machine: _Machine) -> _Machine:
        other = _Machine(n)
        other.memory = [list(layer) for layer in machine.memory]
        other.procs = [
            _ProcessState(
                p.layer, p.wrote, p.reads_done, p.view, p.read_order, p.done,
                p.final_view, list(p.sizes),
            )
            for p in machine.procs
        ]
        return other

    def walk(machine: _Machine) -> None:
        if machine.all_done():
            profiles.add(Profile({i: p.final_view for i, p in enumerate(machine.procs)}))
            return
        key = _state_key(machine)
        if key in seen_states:
            return
        seen_states.add(key)
        for i in machine.enabled():
            nxt = clone(machine)
            nxt.step(i)
            walk(nxt)

    walk(root)
    return tuple(sorted(profiles))


@dataclass(frozen=True)
class FuzzReport:
    runs: int
    violations: tuple[Profile, ...]
    covered: int
    total: int
    coverage: dict[Profile, int]


def fuzz(n: int, runs: int, seed: int) -> FuzzReport:
    """Random runs checked against the immediate-snapshot complex."""
    from .protocol import build_wr, profile_simplex

    chi = build_wr(n, n)
    maximal = set(chi.complex.maximal)
    hits: dict[Profile, int] = {}
    violations = []
    rng = random.Random(seed)
    for _ in range(runs):
        result = run(n, Scheduler.seeded(rng.getrandbits(32)))
        s = profile_simplex(result.profile)
        if s not in maximal:
            violations.append(result.profile)
        else:
            hits[result.profile] = hits.get(result.profile, 0) + 1
    return FuzzReport(runs, tuple(violations), len(hits), len(maximal), hits)
