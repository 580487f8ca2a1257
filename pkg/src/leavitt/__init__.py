"""Exact computations in Leavitt path algebras of finite graphs."""

__version__ = "0.1.0"

from .graph import (  # noqa: E402
    Cycle,
    Graph,
    GraphError,
    Path,
    enumerate_cycles,
    find_exit,
    is_no_exit,
    opposite_graph,
    parse_graph,
    paths_ending_at,
    sinks,
    sources,
)
from .lpa import Element, LeavittPathAlgebra, nonfinite_witness, orthogonal_idempotents  # noqa: E402
from .scalar import GF, QI, Field, Q  # noqa: E402
from .structure import (  # noqa: E402
    BlockMatrix,
    DecompositionData,
    NotNoExit,
    decompose,
    graded_dim,
    iso_decide,
    phi,
    phi_inv,
)
