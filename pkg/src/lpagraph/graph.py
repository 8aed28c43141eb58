"""Directed multigraphs, paths, closed simple paths and conditions (L)/(K).

Vertex and edge ids are opaque strings.  Parallel edges and loops are
allowed and told apart by their ids.  All set-valued results come back in
the graph's declared vertex order so output is deterministic.

Internally vertex sets are bitmasks over the declared order; ``VertexSet``
is the public wrapper around such a mask.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from itertools import islice, product
from typing import Iterable, Iterator, Optional, Sequence

import networkx as nx

from .errors import ResourceCapError, StructuralError, UnknownVertexError

DEFAULT_CYCLE_CAP = 10**6


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    range: str


@dataclass(frozen=True)
class Origin:
    """Where a generated graph came from: a family, its parameters and the truncation depth."""

    family: str
    depth: int
    params: tuple = ()

    def at_depth(self, depth: int) -> "Graph":
        from .generators import generate

        return generate(self.family, depth, **dict(self.params))


@dataclass(frozen=True)
class Graph:
    """A directed multigraph ``E = (E^0, E^1, r, s)``.

    Construction does not validate; call :func:`validate` (or use
    :func:`lpagraph.io.parse`) on untrusted input.
    """

    vertices: tuple[str, ...] = ()
    edges: tuple[Edge, ...] = ()
    origin: Optional[Origin] = field(default=None, compare=False)
    provenance: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable = (), **kwargs) -> "Graph":
        """Build from ``(id, source, range)`` triples or ``(source, range)`` pairs.

        Pairs get ids ``e0, e1, ...`` in the order given.
        """
        built = []
        for k, e in enumerate(edges):
            if isinstance(e, Edge):
                built.append(e)
            elif len(e) == 3:
                built.append(Edge(*e))
            else:
                built.append(Edge(f"e{k}", e[0], e[1]))
        return cls(tuple(vertices), tuple(built), **kwargs)

    # ----- indexing -------------------------------------------------------------

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e.id: k for k, e in enumerate(self.edges)}

    @cached_property
    def _adjacency(self):
        idx = self.index
        n = len(self.vertices)
        out: list[list[int]] = [[] for _ in range(n)]
        inn: list[list[int]] = [[] for _ in range(n)]
        src, rng = [], []
        for k, e in enumerate(self.edges):
            try:
                s, r = idx[e.source], idx[e.range]
            except KeyError:
                raise StructuralError(validate(self).errors) from None
            src.append(s)
            rng.append(r)
            out[s].append(k)
            inn[r].append(k)
        succ = [0] * n
        pred = [0] * n
        for k in range(len(self.edges)):
            succ[src[k]] |= 1 << rng[k]
            pred[rng[k]] |= 1 << src[k]
        return (tuple(map(tuple, out)), tuple(map(tuple, inn)), tuple(src), tuple(rng),
                tuple(succ), tuple(pred))

    @property
    def out_idx(self) -> tuple[tuple[int, ...], ...]:
        return self._adjacency[0]

    @property
    def in_idx(self) -> tuple[tuple[int, ...], ...]:
        return self._adjacency[1]

    @property
    def src(self) -> tuple[int, ...]:
        return self._adjacency[2]

    @property
    def rng(self) -> tuple[int, ...]:
        return self._adjacency[3]

    @property
    def succ(self) -> tuple[int, ...]:
        """Bitmask of out-neighbours per vertex index."""
        return self._adjacency[4]

    @property
    def pred(self) -> tuple[int, ...]:
        return self._adjacency[5]

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    @cached_property
    def emit_mask(self) -> int:
        m = 0
        for i, out in enumerate(self.out_idx):
            if out:
                m |= 1 << i
        return m

    @cached_property
    def reach(self) -> tuple[int, ...]:
        """``reach[i]`` is the mask of ``T(v_i)``."""
        return tuple(_closure_under(1 << i, self.succ) for i in range(len(self.vertices)))

    @cached_property
    def coreach(self) -> tuple[int, ...]:
        """``coreach[i]`` is the mask of vertices ``w`` with ``w >= v_i``."""
        return tuple(_closure_under(1 << i, self.pred) for i in range(len(self.vertices)))

    def vid(self, v: str) -> int:
        try:
            return self.index[v]
        except KeyError:
            raise UnknownVertexError(v) from None

    def mask_of(self, ids: Iterable[str]) -> int:
        if isinstance(ids, VertexSet):
            return ids.mask
        if isinstance(ids, str):
            ids = (ids,)
        m = 0
        for v in ids:
            m |= 1 << self.vid(v)
        return m

    def ids_of(self, mask: int) -> tuple[str, ...]:
        vs = self.vertices
        return tuple(vs[i] for i in iter_bits(mask))

    def vset(self, ids_or_mask) -> "VertexSet":
        if isinstance(ids_or_mask, int):
            return VertexSet(self, ids_or_mask)
        return VertexSet(self, self.mask_of(ids_or_mask))

    def edge(self, edge_id: str) -> Edge:
        return self.edges[self.edge_index[edge_id]]

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return tuple(self.edges[k] for k in self.out_idx[self.vid(v)])

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        return tuple(self.edges[k] for k in self.in_idx[self.vid(v)])

    def subgraph(self, vertex_mask: int, edge_ids: Iterable[int], note: str = "") -> "Graph":
        """Subgraph on the given vertex mask and edge indices, keeping declared order."""
        keep = sorted(set(edge_ids))
        prov = self.provenance + ((note,) if note else ())
        return Graph(self.ids_of(vertex_mask), tuple(self.edges[k] for k in keep), None, prov)

    def with_note(self, note: str) -> "Graph":
        return Graph(self.vertices, self.edges, self.origin, self.provenance + (note,))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def depth_label(self) -> Optional[str]:
        return f"at depth {self.origin.depth}" if self.origin else None

    def __repr__(self):
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"


def _closure_under(start: int, adj: Sequence[int], avoid: int = 0) -> int:
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        for j in iter_bits(frontier):
            nxt |= adj[j]
        nxt &= ~avoid
        frontier = nxt & ~seen
        seen |= nxt
    return seen


class VertexSet:
    """A subset of ``E^0`` tied to its graph, with cached hereditary/saturated flags.

    Iterates in declared order.  Compares equal to a plain ``set`` or
    ``frozenset`` of the same ids.
    """

    __slots__ = ("graph", "mask", "_hereditary", "_saturated")

    def __init__(self, graph: Graph, mask: int):
        self.graph = graph
        self.mask = mask
        self._hereditary: Optional[bool] = None
        self._saturated: Optional[bool] = None

    @property
    def ids(self) -> tuple[str, ...]:
        return self.graph.ids_of(self.mask)

    def __iter__(self):
        return iter(self.ids)

    def __len__(self):
        return bin(self.mask).count("1")

    def __contains__(self, v):
        i = self.graph.index.get(v)
        return i is not None and bool(self.mask >> i & 1)

    def __eq__(self, other):
        if isinstance(other, VertexSet):
            return self.mask == other.mask and self.graph.vertices == other.graph.vertices
        if isinstance(other, (set, frozenset)):
            return frozenset(self.ids) == other
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.ids))

    def __repr__(self):
        return "VertexSet({" + ", ".join(self.ids) + "})"

    def __or__(self, other):
        return VertexSet(self.graph, self.mask | self.graph.mask_of(other))

    def __and__(self, other):
        return VertexSet(self.graph, self.mask & self.graph.mask_of(other))

    def __sub__(self, other):
        return VertexSet(self.graph, self.mask & ~self.graph.mask_of(other))

    def issubset(self, other) -> bool:
        return self.mask & ~self.graph.mask_of(other) == 0

    def complement(self) -> "VertexSet":
        return VertexSet(self.graph, self.graph.full_mask & ~self.mask)

    def to_set(self) -> frozenset:
        return frozenset(self.ids)

    @property
    def hereditary(self) -> bool:
        if self._hereditary is None:
            self._hereditary = mask_is_hereditary(self.graph, self.mask)
        return self._hereditary

    @property
    def saturated(self) -> bool:
        if self._saturated is None:
            self._saturated = mask_is_saturated(self.graph, self.mask)
        return self._saturated

    def cached_flags(self) -> tuple[Optional[bool], Optional[bool]]:
        return self._hereditary, self._saturated


def mask_is_hereditary(g: Graph, mask: int) -> bool:
    succ = g.succ
    return all(succ[i] & ~mask == 0 for i in iter_bits(mask))


def mask_is_saturated(g: Graph, mask: int) -> bool:
    succ = g.succ
    outside = g.emit_mask & ~mask
    return all(succ[i] & ~mask for i in iter_bits(outside))


# ----- validation ----------------------------------------------------------------


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    errors: tuple[str, ...] = ()
    empty: bool = False

    def __bool__(self):
        return self.valid


def validate(g: Graph) -> ValidationResult:
    errors = []
    seen = set()
    for v in g.vertices:
        if not isinstance(v, str) or not v:
            errors.append(f"vertex id {v!r} is not a nonempty string")
        if v in seen:
            errors.append(f"duplicate vertex id {v!r}")
        seen.add(v)
    edge_seen = set()
    for e in g.edges:
        if e.id in edge_seen:
            errors.append(f"duplicate edge id {e.id!r}")
        edge_seen.add(e.id)
        for end, name in ((e.source, "source"), (e.range, "range")):
            if end not in seen:
                errors.append(f"edge {e.id!r} has undeclared {name} {end!r}")
    return ValidationResult(not errors, tuple(errors), not g.vertices)


# ----- reachability ---------------------------------------------------------------


def reaches(g: Graph, v: str, w: str) -> bool:
    """``v >= w``: a possibly empty path runs from ``v`` to ``w``."""
    return bool(g.reach[g.vid(v)] >> g.vid(w) & 1)


def sinks(g: Graph) -> VertexSet:
    return VertexSet(g, g.full_mask & ~g.emit_mask)


def sources(g: Graph) -> VertexSet:
    m = 0
    for i, inn in enumerate(g.in_idx):
        if not inn:
            m |= 1 << i
    return VertexSet(g, m)


def tree_mask(g: Graph, mask: int) -> int:
    reach = g.reach
    out = 0
    for i in iter_bits(mask):
        out |= reach[i]
    return out


def tree(g: Graph, X) -> VertexSet:
    """``T(X)``: every vertex reachable from some member of ``X``."""
    return VertexSet(g, tree_mask(g, g.mask_of(X)))


# ----- paths ----------------------------------------------------------------------


@dataclass(frozen=True)
class Path:
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if not self.edges:
            raise ValueError("a path needs at least one edge")
        for a, b in zip(self.edges, self.edges[1:]):
            if a.range != b.source:
                raise ValueError(f"edges {a.id!r} and {b.id!r} do not compose")

    @property
    def source(self) -> str:
        return self.edges[0].source

    @property
    def range(self) -> str:
        return self.edges[-1].range

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        seen = dict.fromkeys([self.edges[0].source] + [e.range for e in self.edges])
        return tuple(seen)

    def __len__(self):
        return len(self.edges)

    @classmethod
    def from_ids(cls, g: Graph, ids: Sequence[str]) -> "Path":
        return cls(tuple(g.edge(k) for k in ids))


@dataclass(frozen=True)
class ClosedSimplePath(Path):
    """A path from ``v`` back to ``v`` that does not pass through ``v`` in between.

    Other vertices may repeat.
    """

    def __post_init__(self):
        super().__post_init__()
        base = self.source
        if self.range != base:
            raise ValueError("closed simple path must end at its base")
        if any(e.source == base for e in self.edges[1:]):
            raise ValueError("closed simple path revisits its base")

    @property
    def base(self) -> str:
        return self.source


def _edge_path(g: Graph, idxs: Iterable[int], closed: bool = False) -> Path:
    cls = ClosedSimplePath if closed else Path
    return cls(tuple(g.edges[k] for k in idxs))


class CspCount(enum.Enum):
    ZERO = "0"
    ONE = "1"
    TWO_OR_MORE = ">=2"


@dataclass(frozen=True)
class CspClass:
    vertex: str
    count: CspCount
    witnesses: tuple[ClosedSimplePath, ...] = ()

    @property
    def nonzero(self) -> bool:
        return self.count is not CspCount.ZERO


def _csp_region(g: Graph, i: int) -> int:
    """Interior vertices of closed simple paths at ``v_i``: reachable from and
    co-reachable to ``v_i`` without passing through ``v_i``."""
    me = 1 << i
    fwd_start = g.succ[i] & ~me
    bwd_start = g.pred[i] & ~me
    if not fwd_start or not bwd_start:
        return 0
    fwd = _closure_under(fwd_start, g.succ, avoid=me)
    bwd = _closure_under(bwd_start, g.pred, avoid=me)
    return fwd & bwd


def _find_cycle_in(g: Graph, region: int) -> Optional[list[int]]:
    """Edge indices of some cycle inside ``region``, or None if the induced subgraph is acyclic."""
    src, rng = g.src, g.rng
    indeg = {}
    inner = {}
    for j in iter_bits(region):
        inner[j] = [k for k in g.out_idx[j] if region >> rng[k] & 1]
        indeg.setdefault(j, 0)
        for k in inner[j]:
            indeg[rng[k]] = indeg.get(rng[k], 0) + 1
    queue = [j for j, d in indeg.items() if d == 0]
    removed = set()
    while queue:
        j = queue.pop()
        removed.add(j)
        for k in inner[j]:
            t = rng[k]
            indeg[t] -= 1
            if indeg[t] == 0:
                queue.append(t)
    left = [j for j in indeg if j not in removed]
    if not left:
        return None
    left_set = set(left)
    # every leftover vertex has a leftover predecessor; walk backwards until a repeat
    in_edge = {}
    for j in left:
        for k in g.in_idx[j]:
            if src[k] in left_set:
                in_edge[j] = k
                break
    order = []
    pos = {}
    j = min(left)
    while j not in pos:
        pos[j] = len(order)
        k = in_edge[j]
        order.append(k)
        j = src[k]
    back = order[pos[j]:]
    return list(reversed(back))


def _bfs_edges(g: Graph, starts: dict[int, Optional[int]], allowed: int, goal) -> Optional[list[int]]:
    """Shortest edge sequence from the ``starts`` frontier to a vertex satisfying ``goal``."""
    parent = dict(starts)
    queue = list(starts)
    head = 0
    while head < len(queue):
        j = queue[head]
        head += 1
        if goal(j):
            out = []
            while parent[j] is not None:
                k = parent[j]
                out.append(k)
                j = g.src[k]
            return list(reversed(out))
        for k in g.out_idx[j]:
            t = g.rng[k]
            if allowed >> t & 1 and t not in parent:
                parent[t] = k
                queue.append(t)
    return None


def csp_class(g: Graph, v: str) -> CspClass:
    """Classify ``card(CSP_E(v))`` as 0, 1 or at least 2, with witnesses.

    Split ``v`` into an out-copy and an in-copy; closed simple paths at ``v``
    are then exactly the walks between the copies.  There are infinitely many
    if the region between them contains a cycle, otherwise we count paths in
    a DAG.
    """
    i = g.vid(v)
    src, rng = g.src, g.rng
    loops = [k for k in g.out_idx[i] if rng[k] == i]
    region = _csp_region(g, i)
    if not loops and not region:
        return CspClass(v, CspCount.ZERO)
    cycle = _find_cycle_in(g, region) if region else None
    if cycle is not None:
        c = src[cycle[0]]
        head = _bfs_edges_from_v(g, i, region, c)
        tail = _bfs_edges(g, {c: None}, region, lambda j: bool(g.succ[j] >> i & 1))
        end_vertex = rng[tail[-1]] if tail else c
        closing = next(k for k in g.out_idx[end_vertex] if rng[k] == i)
        first = head + tail + [closing]
        second = head + cycle + tail + [closing]
        return CspClass(v, CspCount.TWO_OR_MORE,
                        (_edge_path(g, first, True), _edge_path(g, second, True)))
    walks = list(islice(_dag_walks(g, i, region), 2))
    count = CspCount.ONE if len(walks) == 1 else CspCount.TWO_OR_MORE
    return CspClass(v, count, tuple(_edge_path(g, w, True) for w in walks))


def _bfs_edges_from_v(g: Graph, i: int, region: int, target: int) -> list[int]:
    parent: dict[int, int] = {}
    queue = []
    for k in g.out_idx[i]:
        t = g.rng[k]
        if region >> t & 1 and t not in parent:
            parent[t] = k
            queue.append(t)
    head = 0
    while head < len(queue):
        j = queue[head]
        head += 1
        if j == target:
            break
        for k in g.out_idx[j]:
            t = g.rng[k]
            if region >> t & 1 and t not in parent:
                parent[t] = k
                queue.append(t)
    out = []
    j = target
    while True:
        k = parent[j]
        out.append(k)
        j = g.src[k]
        if j == i:
            break
    return list(reversed(out))


def _dag_walks(g: Graph, i: int, region: int, prefix: tuple = ()) -> Iterator[list[int]]:
    rng = g.rng
    at = i if not prefix else rng[prefix[-1]]
    for k in g.out_idx[at]:
        t = rng[k]
        if t == i:
            yield list(prefix) + [k]
        elif region >> t & 1:
            yield from _dag_walks(g, i, region, prefix + (k,))


def closed_simple_paths(g: Graph, v: str, limit: int, max_length: Optional[int] = None,
                        exclude: Sequence[Path] = ()) -> list[ClosedSimplePath]:
    """The first ``limit`` closed simple paths at ``v`` in shortlex order of edge positions.

    Paths listed in ``exclude`` are skipped.
    """
    i = g.vid(v)
    rng = g.rng
    region = _csp_region(g, i)
    skip = {p.ids for p in exclude}
    if max_length is None:
        max_length = len(g.vertices) * (len(g.edges) + 1)
    found: list[ClosedSimplePath] = []
    level: list[tuple[int, ...]] = [()]
    for _ in range(max_length):
        nxt = []
        for pre in level:
            at = i if not pre else rng[pre[-1]]
            for k in g.out_idx[at]:
                t = rng[k]
                if t == i:
                    p = _edge_path(g, pre + (k,), True)
                    if p.ids not in skip:
                        found.append(p)
                        if len(found) >= limit:
                            return found
                elif region >> t & 1:
                    nxt.append(pre + (k,))
        if not nxt:
            break
        level = nxt
    return found


# ----- conditions (L) and (K) -------------------------------------------------------


@dataclass(frozen=True)
class ConditionResult:
    holds: bool
    witness_vertex: Optional[str] = None
    witness: Optional[Path] = None

    def __bool__(self):
        return self.holds


def condition_L(g: Graph) -> ConditionResult:
    """Every cycle has an exit.

    A cycle without exit runs through vertices emitting exactly one edge, so
    it is a cycle of the partial map "follow the only out-edge".
    """
    out = g.out_idx
    rng = g.rng
    done = set()
    for start in range(len(g.vertices)):
        if start in done or len(out[start]) != 1:
            continue
        order: list[int] = []
        pos: dict[int, int] = {}
        j = start
        while len(out[j]) == 1 and j not in pos and j not in done:
            pos[j] = len(order)
            order.append(j)
            j = rng[out[j][0]]
        if j in pos:
            cyc = order[pos[j]:]
            path = _edge_path(g, [out[x][0] for x in cyc])
            return ConditionResult(False, g.vertices[j], path)
        done.update(order)
    return ConditionResult(True)


def condition_K(g: Graph) -> ConditionResult:
    """Every vertex on a closed simple path is the base of at least two of them."""
    for v in g.vertices:
        c = csp_class(g, v)
        if c.count is CspCount.ONE:
            return ConditionResult(False, v, c.witnesses[0])
    return ConditionResult(True)


# ----- strongly connected components, cycles -----------------------------------------


@dataclass(frozen=True)
class SccInfo:
    components: tuple[tuple[str, ...], ...]
    cyclic: tuple[bool, ...]
    condensation: tuple[tuple[int, int], ...]

    def component_of(self, v: str) -> int:
        for n, comp in enumerate(self.components):
            if v in comp:
                return n
        raise UnknownVertexError(v)


def _digraph(g: Graph) -> nx.DiGraph:
    d = nx.DiGraph()
    d.add_nodes_from(range(len(g.vertices)))
    d.add_edges_from(zip(g.src, g.rng))
    return d


def scc(g: Graph) -> SccInfo:
    """SCC decomposition; components are listed in a topological order of the condensation."""
    d = _digraph(g)
    comps = [sorted(c) for c in nx.strongly_connected_components(d)]
    comps.sort(key=lambda c: c[0])
    where = {j: n for n, c in enumerate(comps) for j in c}
    cond = nx.DiGraph()
    cond.add_nodes_from(range(len(comps)))
    for a, b in zip(g.src, g.rng):
        if where[a] != where[b]:
            cond.add_edge(where[a], where[b])
    order = list(nx.lexicographical_topological_sort(cond, key=lambda n: comps[n][0]))
    renum = {old: new for new, old in enumerate(order)}
    loops = {a for a, b in zip(g.src, g.rng) if a == b}
    components = tuple(tuple(g.vertices[j] for j in comps[old]) for old in order)
    cyclic = tuple(len(comps[old]) > 1 or comps[old][0] in loops for old in order)
    arcs = tuple(sorted({(renum[a], renum[b]) for a, b in cond.edges}))
    return SccInfo(components, cyclic, arcs)


def cyclic_mask(g: Graph) -> int:
    """Vertices lying on some cycle."""
    reach, succ = g.reach, g.succ
    m = 0
    for i in range(len(g.vertices)):
        for j in iter_bits(succ[i]):
            if reach[j] >> i & 1:
                m |= 1 << i
                break
    return m


def cycle_vertex_within(g: Graph, mask: int) -> Optional[int]:
    """Some vertex on a cycle of the subgraph induced on ``mask``, or None."""
    succ = g.succ
    for i in iter_bits(mask):
        seen = frontier = succ[i] & mask
        while frontier and not seen >> i & 1:
            nxt = 0
            for j in iter_bits(frontier):
                nxt |= succ[j]
            nxt &= mask
            frontier = nxt & ~seen
            seen |= nxt
        if seen >> i & 1:
            return i
    return None


def is_acyclic(g: Graph) -> bool:
    return cyclic_mask(g) == 0


def simple_cycles(g: Graph, cap: int = DEFAULT_CYCLE_CAP) -> list[Path]:
    """Every cycle (pairwise distinct vertices) as an edge sequence.

    Parallel edges give distinct cycles.  More than ``cap`` cycles raises
    :class:`ResourceCapError` rather than truncating.
    """
    by_pair: dict[tuple[int, int], list[int]] = {}
    for k, (a, b) in enumerate(zip(g.src, g.rng)):
        by_pair.setdefault((a, b), []).append(k)
    found: list[Path] = []
    for cyc in nx.simple_cycles(_digraph(g)):
        start = cyc.index(min(cyc))
        cyc = cyc[start:] + cyc[:start]
        hops = [by_pair[(cyc[n], cyc[(n + 1) % len(cyc)])] for n in range(len(cyc))]
        for choice in product(*hops):
            found.append(_edge_path(g, choice))
            if len(found) > cap:
                raise ResourceCapError(f"more than {cap} simple cycles")
    found.sort(key=lambda p: (len(p), [g.edge_index[e] for e in p.ids]))
    return found


def has_exit(g: Graph, path: Path) -> bool:
    on_path = set(path.ids)
    return any(e.id not in on_path for v in {e.source for e in path.edges} for e in g.out_edges(v))
