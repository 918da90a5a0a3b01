"""Process-id sets as integer bitmasks.

All id sets in the toolkit are masks over [0, MAX_DIMENSION]; subset,
union and intersection tests are single integer operations.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def bit(i: int) -> int:
    return 1 << i


def mask_of(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def ids_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    m = mask
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def size(mask: int) -> int:
    return mask.bit_count()


def has(mask: int, i: int) -> bool:
    return bool(mask & (1 << i))


def full_mask(n: int) -> int:
    """Mask of [n] = {0, ..., n}."""
    return (1 << (n + 1)) - 1


def subsets(mask: int) -> Iterator[int]:
    """All submasks of `mask`, including 0 and mask itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def permute_mask(mask: int, perm: tuple[int, ...]) -> int:
    out = 0
    for i in ids_of(mask):
        out |= 1 << perm[i]
    return out
