"""Graphs built from a graph: entry paths into H, the ideal graph, loop and exit
completions, and the finite (K)-preserving filtration."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import InvariantFailure, PreconditionError, ResourceCapError
from .graph import (
    ClosedSimplePath,
    Edge,
    Graph,
    Path,
    _find_cycle_in,
    closed_simple_paths,
    condition_K,
    cycle_vertex_within,
    iter_bits,
    mask_is_hereditary,
    sinks,
    validate,
)
from .hersat import closure_mask, quotient_graph

SubgraphLike = Union[Graph, tuple]


def subgraph_masks(g: Graph, F: SubgraphLike) -> tuple[int, set[int]]:
    """Vertex mask and edge-index set of a subgraph of ``g``.

    ``F`` is a Graph whose vertices and edges all belong to ``g``, or a pair
    ``(vertex ids, edge ids)``.  Endpoints of listed edges are added.
    """
    if isinstance(F, Graph):
        vids, eids = F.vertices, [e.id for e in F.edges]
        for e in F.edges:
            if e.id not in g.edge_index or g.edge(e.id) != e:
                raise PreconditionError(f"edge {e.id!r} is not an edge of the ambient graph")
    else:
        vids, eids = F
    vmask = g.mask_of(vids)
    edges = set()
    for eid in eids:
        try:
            k = g.edge_index[eid]
        except KeyError:
            raise PreconditionError(f"unknown edge {eid!r}") from None
        edges.add(k)
        vmask |= 1 << g.src[k] | 1 << g.rng[k]
    return vmask, edges


# ----- F_E(H) and the ideal graph --------------------------------------------------


@dataclass(frozen=True)
class FSet:
    """Paths entering ``H`` for the first time at their last edge.

    ``finite`` False means infinitely many; ``cycle`` and ``connector`` then
    certify it: a cycle outside ``H`` and a path from it into ``H``.
    """

    finite: bool
    paths: tuple[Path, ...] = ()
    cycle: Optional[Path] = None
    connector: Optional[Path] = None


def f_set(g: Graph, H) -> FSet:
    h = g.mask_of(H)
    if h == 0:
        raise PreconditionError("H must be nonempty")
    if not mask_is_hereditary(g, h):
        raise PreconditionError("H must be hereditary")
    outside = g.full_mask & ~h
    feeders = 0
    for j in iter_bits(h):
        feeders |= g.coreach[j]
    feeders &= outside
    if cycle_vertex_within(g, feeders) is not None:
        cyc = _find_cycle_in(g, feeders)
        c = g.src[cyc[0]]
        conn = _path_into(g, c, feeders, h)
        return FSet(False, (), Path(tuple(g.edges[k] for k in cyc)),
                    Path(tuple(g.edges[k] for k in conn)))
    found = []

    def grow(at, prefix):
        for k in g.out_idx[at]:
            t = g.rng[k]
            if h >> t & 1:
                found.append(prefix + (k,))
            elif feeders >> t & 1:
                grow(t, prefix + (k,))

    for j in iter_bits(feeders):
        grow(j, ())
    return FSet(True, tuple(Path(tuple(g.edges[k] for k in p)) for p in found))


def _path_into(g: Graph, start: int, allowed: int, target: int) -> list[int]:
    parent = {start: None}
    queue = [start]
    for j in queue:
        for k in g.out_idx[j]:
            t = g.rng[k]
            if target >> t & 1:
                out = [k]
                while parent[j] is not None:
                    out.append(parent[j])
                    j = g.src[parent[j]]
                return list(reversed(out))
            if allowed >> t & 1 and t not in parent:
                parent[t] = k
                queue.append(t)
    raise InvariantFailure("feeder vertex has no path into H")


def path_vertex_id(p: Path) -> str:
    return "path:" + ".".join(p.ids)


def h_graph(g: Graph, H) -> Graph:
    """The graph presenting the ideal generated by ``H``.

    Vertices are ``H`` plus one new source per entry path; each new source
    emits a single edge to the path's range.
    """
    fs = f_set(g, H)
    if not fs.finite:
        raise PreconditionError("entry paths into H are infinite; the ideal graph is not finite")
    h = g.mask_of(H)
    vertices = list(g.ids_of(h))
    edges = [e for k, e in enumerate(g.edges) if h >> g.src[k] & 1]
    for p in fs.paths:
        pid = path_vertex_id(p)
        vertices.append(pid)
        edges.append(Edge("bar:" + ".".join(p.ids), pid, p.range))
    out = Graph(tuple(vertices), tuple(edges), None,
                g.provenance + (f"ideal graph of {{{', '.join(g.ids_of(h))}}}",))
    check = validate(out)
    if not check.valid:
        raise PreconditionError("ideal graph ids collide: " + "; ".join(check.errors))
    return out


# ----- completions -----------------------------------------------------------------


def loop_completion(g: Graph, T: SubgraphLike) -> Graph:
    """``T`` together with every closed path based at a vertex of ``T``.

    Uses the strongly connected characterisation: a closed walk through ``t``
    visits exactly the vertices ``w`` with ``t >= w >= t``.
    """
    vmask, edges = subgraph_masks(g, T)
    reach, coreach = g.reach, g.coreach
    band = {}
    for t in iter_bits(vmask):
        band[t] = (reach[t], coreach[t])
        vmask |= reach[t] & coreach[t]
    edges = set(edges)
    for k in range(len(g.edges)):
        s, r = g.src[k], g.rng[k]
        if any(fw >> s & 1 and bw >> r & 1 for fw, bw in band.values()):
            edges.add(k)
    note = "loop completion"
    if g.origin is not None:
        note += f" at depth {g.origin.depth}"
    return g.subgraph(vmask, edges, note)


def exit_completion(g: Graph, F: SubgraphLike) -> Graph:
    """Add every edge sharing a source with an edge of ``F``, and its range."""
    vmask, edges = subgraph_masks(g, F)
    sources = {g.src[k] for k in edges}
    added = set(edges)
    for s in sources:
        added.update(g.out_idx[s])
    for k in added:
        vmask |= 1 << g.rng[k]
    return g.subgraph(vmask, added, "exit completion")


def is_exit_complete(g: Graph, F: SubgraphLike) -> bool:
    vmask, edges = subgraph_masks(g, F)
    G = exit_completion(g, F)
    return g.mask_of(G.vertices) == vmask and {g.edge_index[e.id] for e in G.edges} == edges


@dataclass(frozen=True)
class CompletionChain:
    loop: Graph
    exit: Graph
    sinks: tuple[str, ...]
    quotient: Graph


def completion_chain(g: Graph, T: SubgraphLike) -> CompletionChain:
    """``F = loop completion of T``, ``G = exit completion of F``, ``S = sinks(G)``,
    ``J = G / closure_G(S)``."""
    F = loop_completion(g, T)
    G = exit_completion(g, F)
    S = sinks(G)
    J = quotient_graph(G, G.vset(closure_mask(G, S.mask)))
    return CompletionChain(F, G, S.ids, J)


# ----- filtration by finite complete subgraphs ---------------------------------------


def is_complete_inclusion(g: Graph, X: Graph) -> bool:
    """Inclusion ``X -> g`` is a complete graph homomorphism: every vertex that
    emits in ``X`` emits there exactly its out-edges in ``g``."""
    for e in X.edges:
        if e.id not in g.edge_index or g.edge(e.id) != e:
            return False
    for v in X.vertices:
        if v not in g.index:
            return False
        mine = {e.id for e in X.out_edges(v)}
        if mine and mine != {e.id for e in g.out_edges(v)}:
            return False
    return True


@dataclass(frozen=True)
class Filtration:
    stages: tuple[Graph, ...]
    log: tuple[str, ...] = ()


def _least_other_csp(g: Graph, v: str, avoid: ClosedSimplePath) -> ClosedSimplePath:
    found = closed_simple_paths(g, v, 1, exclude=[avoid])
    if not found:
        raise InvariantFailure(f"vertex {v!r} has a single closed simple path in the whole graph")
    return found[0]


def k_filtration(g: Graph, N: int, max_repairs: int = 10_000) -> Filtration:
    """Stages ``X_0 ⊆ ... ⊆ X_N`` of finite subgraphs, each satisfying (K) and
    each included completely in ``g``.

    ``X_0`` is the first vertex alone.  Stage ``n+1`` takes every out-edge of
    ``X_n``, the next vertex and all ranges.  While a vertex has a unique
    closed simple path there, the shortlex-least other closed simple path at
    it in ``g`` is added together with all out-edges of its vertices.
    """
    if N < 0:
        raise PreconditionError("stage count must be non-negative")
    if not condition_K(g):
        raise PreconditionError("filtration requires condition (K)")
    if not g.vertices:
        return Filtration((g,) * (N + 1), ("empty graph",))
    log = []
    vmask = 1
    emask: set[int] = set()
    stages = [g.subgraph(vmask, emask, "filtration stage 0")]
    repairs = 0
    for n in range(N):
        new_edges = set(emask)
        for j in iter_bits(vmask):
            new_edges.update(g.out_idx[j])
        new_v = vmask
        if n + 1 < len(g.vertices):
            new_v |= 1 << (n + 1)
        for k in new_edges:
            new_v |= 1 << g.rng[k]
        while True:
            X = g.subgraph(new_v, new_edges)
            bad = condition_K(X)
            if bad:
                break
            repairs += 1
            if repairs > max_repairs:
                raise ResourceCapError("filtration repair budget exhausted")
            v = bad.witness_vertex
            mu2 = _least_other_csp(g, v, bad.witness)
            log.append(f"stage {n + 1}: vertex {v} had one closed simple path "
                       f"{'.'.join(bad.witness.ids)}; added {'.'.join(mu2.ids)}")
            on_mu2 = set()
            for e in mu2.edges:
                k = g.edge_index[e.id]
                new_edges.add(k)
                on_mu2.add(g.src[k])
            for j in on_mu2:
                new_edges.update(g.out_idx[j])
            for k in new_edges:
                new_v |= 1 << g.src[k] | 1 << g.rng[k]
        vmask, emask = new_v, new_edges
        stage = g.subgraph(vmask, emask, f"filtration stage {n + 1}")
        stages.append(stage)
    for n, X in enumerate(stages):
        if not condition_K(X):
            raise InvariantFailure(f"filtration stage {n} fails condition (K)")
        if not is_complete_inclusion(g, X):
            raise InvariantFailure(f"filtration stage {n} is not a complete subgraph")
        if n and not (set(stages[n - 1].vertices) <= set(X.vertices)
                      and set(stages[n - 1].edges) <= set(X.edges)):
            raise InvariantFailure(f"filtration stage {n} does not contain stage {n - 1}")
    return Filtration(tuple(stages), tuple(log))
