"""One-round write/read executions, views, and their multi-round families.

A one-round execution is a linear order on operations: each participant
writes its id to its own register once and then reads every register.
Views are the id sets a process observed; a profile assigns a view to
each participant.  Multi-round executions chain one-round executions
over disjoint register arrays, dropping the processes whose round-k view
already reached the exit quota n+1-k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from . import bits
from .errors import (
    DuplicateOperation,
    ForeignOperation,
    MissingOperation,
    NotAParticipant,
    TooShort,
    UnrealizableProfile,
    WriteAfterRead,
)
from .limits import check_dimension

# Operations are tuples: ('w', i) writes i's register, ('r', i, j) is
# process i reading register j.
Operation = tuple

WRITE = "w"
READ = "r"


def write_op(i: int) -> Operation:
    return (WRITE, i)


def read_op(i: int, j: int) -> Operation:
    return (READ, i, j)


def op_process(op: Operation) -> int:
    return op[1]


def is_write(op: Operation) -> bool:
    return op[0] == WRITE


@dataclass(frozen=True)
class LocalView:
    """The ids whose writes a process observed during its reads."""

    owner: int
    seen: int  # bitmask

    @property
    def ids(self) -> tuple[int, ...]:
        return bits.ids_of(self.seen)


class Profile:
    """A view per participant; the unit of execution equivalence.

    Canonical form is the sorted tuple of (id, view mask) pairs, which
    also serves as the deduplication and ordering key.
    """

    __slots__ = ("items",)

    def __init__(self, views: Mapping[int, int] | Iterable[tuple[int, int]]):
        if isinstance(views, Mapping):
            pairs = views.items()
        else:
            pairs = views
        self.items: tuple[tuple[int, int], ...] = tuple(sorted(pairs))

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.items)

    def view(self, i: int) -> int:
        for p, v in self.items:
            if p == i:
                return v
        raise NotAParticipant(f"process {i} has no view in this profile")

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def restrict(self, mask: int) -> "Profile":
        return Profile((i, v) for i, v in self.items if bits.has(mask, i))

    def __eq__(self, other) -> bool:
        return isinstance(other, Profile) and self.items == other.items

    def __hash__(self) -> int:
        return hash(self.items)

    def __lt__(self, other: "Profile") -> bool:
        return self.items < other.items

    def __repr__(self) -> str:
        body = ", ".join(f"{i}:{{{','.join(map(str, bits.ids_of(v)))}}}" for i, v in self.items)
        return f"Profile({body})"


@dataclass(frozen=True)
class WrExecution:
    """A linear order on the write/read operations of a participant set."""

    n: int
    participants: int  # bitmask
    order: tuple[Operation, ...]

    @classmethod
    def from_ops(cls, n: int, ops: Iterable[Operation]) -> "WrExecution":
        order = tuple(tuple(op) for op in ops)
        participants = bits.mask_of(op_process(op) for op in order if is_write(op))
        return cls(n, participants, order)

    @property
    def ids(self) -> tuple[int, ...]:
        return bits.ids_of(self.participants)


def validate(e: WrExecution) -> None:
    """Check the linear-order contract; raises on the first violation."""
    expected_reads = e.n + 1
    write_pos: dict[int, int] = {}
    reads: dict[int, dict[int, int]] = {i: {} for i in e.ids}
    for pos, op in enumerate(e.order):
        p = op_process(op)
        if not bits.has(e.participants, p):
            raise ForeignOperation(f"operation {op} by non-participant {p}")
        if is_write(op):
            if p in write_pos:
                raise DuplicateOperation(f"second write by {p}")
            write_pos[p] = pos
        else:
            j = op[2]
            if not 0 <= j <= e.n:
                raise ForeignOperation(f"read of register {j} outside [0, {e.n}]")
            if j in reads[p]:
                raise DuplicateOperation(f"second read of register {j} by {p}")
            reads[p][j] = pos
    for i in e.ids:
        if i not in write_pos:
            raise MissingOperation(f"no write by participant {i}")
        if len(reads[i]) != expected_reads:
            missing = sorted(set(range(e.n + 1)) - set(reads[i]))
            raise MissingOperation(f"participant {i} did not read registers {missing}")
        for j, pos in reads[i].items():
            if pos < write_pos[i]:
                raise WriteAfterRead(f"{i} read register {j} before writing")


def local_view(e: WrExecution, i: int) -> LocalView:
    """Ids j whose write precedes i's read of register j."""
    if not bits.has(e.participants, i):
        raise NotAParticipant(f"process {i} does not participate")
    write_pos = {op_process(op): pos for pos, op in enumerate(e.order) if is_write(op)}
    seen = 0
    for pos, op in enumerate(e.order):
        if not is_write(op) and op_process(op) == i:
            j = op[2]
            if j in write_pos and write_pos[j] < pos:
                seen |= bits.bit(j)
    return LocalView(i, seen)


def view_profile(e: WrExecution) -> Profile:
    validate(e)
    return Profile({i: local_view(e, i).seen for i in e.ids})


def is_snapshot_view(e: WrExecution, i: int) -> bool:
    """True iff every write lands before i's first read or after its last."""
    if not bits.has(e.participants, i):
        raise NotAParticipant(f"process {i} does not participate")
    read_positions = [
        pos for pos, op in enumerate(e.order) if not is_write(op) and op_process(op) == i
    ]
    if not read_positions:
        return True
    first, last = min(read_positions), max(read_positions)
    for pos, op in enumerate(e.order):
        if is_write(op) and first < pos < last:
            return False
    return True


def is_immediate_snapshot(e: WrExecution) -> bool:
    """True iff the order factors into write-block / read-block rounds.

    Each block is a set of writes by some processes S followed by all
    n+1 reads of every member of S, with each participant in exactly
    one block.
    """
    validate(e)
    ops = list(e.order)
    pos = 0
    placed = 0
    while pos < len(ops):
        block = 0
        while pos < len(ops) and is_write(ops[pos]):
            block |= bits.bit(op_process(ops[pos]))
            pos += 1
        if block == 0:
            return False
        pending = {i: e.n + 1 for i in bits.ids_of(block)}
        while pending:
            if pos >= len(ops) or is_write(ops[pos]):
                return False
            reader = op_process(ops[pos])
            if reader not in pending:
                return False
            pending[reader] -= 1
            if pending[reader] == 0:
                del pending[reader]
            pos += 1
        placed |= block
    return placed == e.participants


def winner(e: WrExecution) -> int:
    """A participant whose view is the whole participant set.

    The last process to write qualifies, and is the one returned.
    """
    validate(e)
    last = None
    for op in e.order:
        if is_write(op):
            last = op_process(op)
    if last is None:
        raise MissingOperation("execution has no writes")
    return last


# --- multi-round executions -------------------------------------------------

@dataclass(frozen=True)
class IsExecution:
    """A chain of one-round executions over disjoint register arrays."""

    n: int
    rounds: tuple[WrExecution, ...]

    @property
    def length(self) -> int:
        return len(self.rounds)


def exit_quota(n: int, k: int) -> int:
    """View size at which a process leaves after round k."""
    return n + 1 - k


def round_exiters(e: WrExecution, n: int, k: int) -> int:
    """Mask of participants whose round-k view has size n+1-k."""
    quota = exit_quota(n, k)
    out = 0
    for i in e.ids:
        if bits.size(local_view(e, i).seen) == quota:
            out |= bits.bit(i)
    return out


def validate_is(x: IsExecution) -> None:
    if not x.rounds:
        raise TooShort("a multi-round execution needs at least one round")
    if x.length > x.n + 1:
        raise ForeignOperation(f"{x.length} rounds exceed the bound n+1={x.n + 1}")
    if x.rounds[0].participants != bits.full_mask(x.n):
        raise ForeignOperation("round 0 must involve every process")
    expected = bits.full_mask(x.n)
    for k, rnd in enumerate(x.rounds):
        if rnd.n != x.n:
            raise ForeignOperation("round dimension mismatch")
        if rnd.participants != expected:
            raise ForeignOperation(f"round {k} participants do not match the exit rule")
        validate(rnd)
        expected = rnd.participants & ~round_exiters(rnd, x.n, k)


def is_view(x: IsExecution) -> Profile:
    """Final views: each process keeps its view from its last round."""
    validate_is(x)
    views: dict[int, int] = {}
    for k, rnd in enumerate(x.rounds):
        for i in rnd.ids:
            views[i] = local_view(rnd, i).seen
    return Profile(views)


def compress_last_round(x: IsExecution) -> IsExecution:
    """Merge the last two rounds into one without changing the profile.

    Processes that exited after the second-to-last round keep their view
    from it; the rest adopt their last-round views.  The merged round is
    synthesized as an explicit linear order realizing those views.
    """
    if x.length < 2:
        raise TooShort("nothing to compress in an execution of length < 2")
    validate_is(x)
    l = x.length - 2
    last, prev = x.rounds[-1], x.rounds[-2]
    exiters = round_exiters(prev, x.n, l)
    merged: dict[int, int] = {}
    for i in prev.ids:
        if bits.has(exiters, i):
            merged[i] = local_view(prev, i).seen
        else:
            merged[i] = local_view(last, i).seen
    new_round = profile_to_execution(Profile(merged), x.n)
    return IsExecution(x.n, x.rounds[:-2] + (new_round,))


# --- profile synthesis -------------------------------------------------------

def writer_order(profile: Profile) -> tuple[int, ...]:
    """A write order in which every view contains all earlier writers.

    Built back to front: the last writer among a set must see the whole
    set, and removing it cannot break anyone else's constraint.
    """
    remaining = bits.mask_of(profile.ids)
    reverse = []
    while remaining:
        for i in bits.ids_of(remaining):
            if remaining & ~profile.view(i) == 0:
                reverse.append(i)
                remaining &= ~bits.bit(i)
                break
        else:
            raise UnrealizableProfile(f"no consistent write order for {profile}")
    return tuple(reversed(reverse))


def profile_to_execution(profile: Profile, n: int) -> WrExecution:
    """A sequential execution realizing the given views.

    Writes go in a consistent order; a read that must miss a later write
    is placed in the gap just before that write, every other read after
    the final write.
    """
    order = writer_order(profile)
    ops: list[Operation] = []
    done_reads: dict[int, set[int]] = {i: set() for i in profile.ids}
    for pos, p in enumerate(order):
        ops.append(write_op(p))
        if pos + 1 < len(order):
            nxt = order[pos + 1]
            for q in order[: pos + 1]:
                if not bits.has(profile.view(q), nxt):
                    ops.append(read_op(q, nxt))
                    done_reads[q].add(nxt)
    for q in order:
        for j in range(n + 1):
            if j not in done_reads[q]:
                ops.append(read_op(q, j))
    e = WrExecution(n, bits.mask_of(profile.ids), tuple(ops))
    return e


def block_execution(n: int, blocks: Iterable[Iterable[int]]) -> WrExecution:
    """Immediate-snapshot execution from ordered concurrency classes."""
    ops: list[Operation] = []
    for block in blocks:
        members = sorted(block)
        for i in members:
            ops.append(write_op(i))
        for i in members:
            for j in range(n + 1):
                ops.append(read_op(i, j))
    return WrExecution.from_ops(n, ops)


# --- view families ------------------------------------------------------------

@lru_cache(maxsize=None)
def round_profiles(participants: int) -> tuple[Profile, ...]:
    """All one-round view profiles of the given participant set.

    Views are generated by placing writes in every order and letting
    each process additionally observe any subset of the later writers;
    earlier writers are always observed.
    """
    ids = bits.ids_of(participants)
    if not ids:
        return (Profile({}),)
    seen: set[Profile] = set()
    for perm in itertools.permutations(ids):
        later = []
        acc = participants
        for p in perm:
            acc &= ~bits.bit(p)
            later.append(acc)
        prefix = 0
        prefixes = []
        for p in perm:
            prefix |= bits.bit(p)
            prefixes.append(prefix)
        extra_choices = [tuple(bits.subsets(m)) for m in later]
        for extras in itertools.product(*extra_choices):
            seen.add(Profile({p: prefixes[k] | extras[k] for k, p in enumerate(perm)}))
    return tuple(sorted(seen))


@lru_cache(maxsize=None)
def _family(n: int, k: int, l: int, active: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Partial profiles for the still-active processes, rounds k..l."""
    if active == 0:
        return ((),)
    if k == l:
        return tuple(p.items for p in round_profiles(active))
    quota = exit_quota(n, k)
    out: set[tuple[tuple[int, int], ...]] = set()
    for rho in round_profiles(active):
        exited = tuple((i, v) for i, v in rho.items if bits.size(v) == quota)
        rest = active & ~bits.mask_of(i for i, _ in exited)
        for tail in _family(n, k + 1, l, rest):
            out.add(tuple(sorted(exited + tail)))
    return tuple(sorted(out))


def view_family(n: int, l: int, *, bound: int | None = None) -> tuple[Profile, ...]:
    """The profiles of all executions with exactly l+1 rounds, sorted."""
    check_dimension(n, bound=bound)
    if not 0 <= l <= n:
        raise TooShort(f"round index l={l} outside [0, {n}]")
    return tuple(Profile(items) for items in _family(n, 0, l, bits.full_mask(n)))


def enumerate_view_family(n: int, l: int) -> tuple[Profile, ...]:
    """Alias for view_family, matching the external surface."""
    return view_family(n, l)


def iter_round_sequences(n: int, l: int) -> Iterator[tuple[Profile, ...]]:
    """All per-round profile sequences of executions with l+1 rounds.

    Rounds after everyone has exited are empty profiles.
    """
    def rec(k: int, active: int, acc: tuple[Profile, ...]):
        if k > l:
            yield acc
            return
        for rho in round_profiles(active):
            exited = bits.mask_of(
                i for i, v in rho.items if bits.size(v) == exit_quota(n, k)
            )
            yield from rec(k + 1, active & ~exited, acc + (rho,))

    yield from rec(0, bits.full_mask(n), ())


def final_profile_of_rounds(n: int, rounds: Iterable[Profile]) -> Profile:
    """Final views from a per-round profile sequence."""
    views: dict[int, int] = {}
    for rho in rounds:
        for i, v in rho.items:
            views[i] = v
    return Profile(views)
