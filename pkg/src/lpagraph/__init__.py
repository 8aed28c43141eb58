"""Decide properties of Leavitt path algebras from their directed graphs."""
from .errors import (
    DepthLimitError,
    DocumentError,
    InvariantFailure,
    LpaGraphError,
    PreconditionError,
    ResourceCapError,
    StructuralError,
    UnknownVertexError,
)
from .graph import (
    ClosedSimplePath,
    CspCount,
    Edge,
    Graph,
    Path,
    VertexSet,
    closed_simple_paths,
    condition_K,
    condition_L,
    csp_class,
    is_acyclic,
    scc,
    simple_cycles,
    validate,
)
from .generators import generate
from .hersat import closure, enumerate_lattice, is_cofinal, quotient_graph, restriction_graph
from .constructions import completion_chain, exit_completion, f_set, h_graph, k_filtration, loop_completion
from .classification import (
    classify,
    exchange_equivalence_audit,
    is_exchange,
    maximal_tails,
    pis_quotient_witness,
    stable_rank,
    x0_set,
)
from .monoid import MonoidElement, monoid_equal, monoid_leq, replay, trace_solve
from .named import named
from .io import export_dot, parse, serialize

__version__ = "0.1.0"
