"""Size guards for complex builds and enumerations.

Everything here is desk scale: the default ambient dimension bound is 3
and can be raised through the WRTOPO_MAX_N environment variable (hard
cap 7, the width assumed by the bitmask representation).
"""

from __future__ import annotations

import os

from .errors import DimensionTooLarge

HARD_MAX_N = 7
DEFAULT_MAX_N = 3
EXHAUSTIVE_MAX_N = 2
ENV_MAX_N = "WRTOPO_MAX_N"


def max_dimension() -> int:
    raw = os.environ.get(ENV_MAX_N)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_MAX_N
    return max(0, min(value, HARD_MAX_N))


def check_dimension(n: int, *, bound: int | None = None) -> None:
    limit = max_dimension() if bound is None else bound
    if n < 0:
        raise DimensionTooLarge(f"dimension must be nonnegative, got {n}")
    if n > limit:
        raise DimensionTooLarge(f"n={n} exceeds the size bound {limit}")


def check_iterated(n: int, k: int) -> None:
    """Guard for level-k builds: (1, k<=3) and (2, 2) besides level 1."""
    check_dimension(n)
    if k < 1:
        raise DimensionTooLarge(f"round count must be >= 1, got {k}")
    if k == 1:
        return
    if n == 1 and k <= 3:
        return
    if n == 2 and k == 2:
        return
    raise DimensionTooLarge(f"iterated build (n={n}, k={k}) exceeds the size bound")
