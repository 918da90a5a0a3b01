"""Combinatorial topology of one-round and iterated write/read protocols.

Builds the protocol complexes of the write/read shared-memory model,
executes and verifies the collapse sequences taking them down to the
chromatic subdivision (and onward to the void complex), and simulates
the recursive scan protocol whose runs realize those collapses.
"""

from .complexes import (
    CollapseStep,
    CollapseTrace,
    Complex,
    apply_permutation,
    closure,
    collapse,
    euler_characteristic,
    g_collapse,
    is_free,
    is_g_free,
    star_interval,
    verify_trace,
)
from .engine import (
    chromatic_collapse_horn,
    chromatic_collapse_void,
    collapse_round,
    completion_vertices,
    equivariant_collapse_round,
    full_collapse,
    interval_bounds,
    interval_decomposition,
    iterated_collapse,
)
from .executions import (
    IsExecution,
    LocalView,
    Profile,
    WrExecution,
    compress_last_round,
    enumerate_view_family,
    is_immediate_snapshot,
    is_snapshot_view,
    is_view,
    local_view,
    validate,
    view_family,
    view_profile,
    winner,
)
from .protocol import (
    IteratedComplex,
    MatrixForm,
    WrComplex,
    build_iterated,
    build_wr,
    chi_power,
    chromatic_subdivision,
    in_next_level,
    matrix_form,
    sigma_parts,
)
from .simulator import FuzzReport, RunResult, Scheduler, fuzz, run, run_exhaustive

__version__ = "0.1.0"
