"""Infinite graph families, exposed through finite truncations.

A truncation at depth ``d`` keeps the first ``d`` vertices of the family's
enumeration and every edge between them.  Truncations nest: the graph at
depth ``d`` is a subgraph of the one at ``d + 1`` with the same ids.
"""
from __future__ import annotations

from .errors import PreconditionError
from .graph import Edge, Graph, Origin


def rose_ladder(depth: int) -> Graph:
    """``v_i`` carries two loops and ``v_{i+1} -> v_i``."""
    vs = [f"v{i}" for i in range(1, depth + 1)]
    edges = []
    for i in range(1, depth + 1):
        edges.append(Edge(f"a{i}", f"v{i}", f"v{i}"))
        edges.append(Edge(f"b{i}", f"v{i}", f"v{i}"))
        if i > 1:
            edges.append(Edge(f"f{i}", f"v{i}", f"v{i - 1}"))
    return Graph(tuple(vs), tuple(edges))


def paper_chain(depth: int) -> Graph:
    """One-sided chain with edges in both directions between neighbours."""
    vs = [f"w{i}" for i in range(depth)]
    edges = []
    for i in range(depth - 1):
        edges.append(Edge(f"r{i}", f"w{i}", f"w{i + 1}"))
        edges.append(Edge(f"l{i}", f"w{i + 1}", f"w{i}"))
    return Graph(tuple(vs), tuple(edges))


def forward_chain(depth: int) -> Graph:
    vs = [f"w{i}" for i in range(depth)]
    edges = [Edge(f"r{i}", f"w{i}", f"w{i + 1}") for i in range(depth - 1)]
    return Graph(tuple(vs), tuple(edges))


FAMILIES = {
    "rose_ladder": rose_ladder,
    "paper_chain": paper_chain,
    "forward_chain": forward_chain,
}


def generate(family: str, depth: int, **params) -> Graph:
    try:
        build = FAMILIES[family]
    except KeyError:
        raise PreconditionError(f"unknown generator family {family!r}") from None
    if not isinstance(depth, int) or depth < 0:
        raise PreconditionError(f"depth must be a non-negative integer, got {depth!r}")
    g = build(depth, **params)
    origin = Origin(family, depth, tuple(sorted(params.items())))
    return Graph(g.vertices, g.edges, origin, (f"{family} truncated at depth {depth}",))
