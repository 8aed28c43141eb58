"""Hereditary and saturated vertex sets, the lattice they form, quotients and cofinality."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import DepthLimitError, InvariantFailure, PreconditionError, ResourceCapError
from .graph import (
    Graph,
    VertexSet,
    cycle_vertex_within,
    iter_bits,
    mask_is_hereditary,
    mask_is_saturated,
    tree_mask,
)

DEFAULT_LATTICE_CAP = 24


def is_hereditary(g: Graph, S) -> bool:
    return mask_is_hereditary(g, g.mask_of(S))


def is_saturated(g: Graph, S) -> bool:
    return mask_is_saturated(g, g.mask_of(S))


def is_hersat(g: Graph, S) -> bool:
    m = g.mask_of(S)
    return mask_is_hereditary(g, m) and mask_is_saturated(g, m)


def lambda_step_mask(g: Graph, mask: int) -> int:
    succ = g.succ
    out = mask
    for i in iter_bits(g.emit_mask & ~mask):
        if succ[i] & ~mask == 0:
            out |= 1 << i
    return out


def lambda_step(g: Graph, S) -> VertexSet:
    """One saturation step: add every non-sink whose out-edges all land in ``S``."""
    return VertexSet(g, lambda_step_mask(g, g.mask_of(S)))


def closure_mask(g: Graph, mask: int) -> int:
    cur = tree_mask(g, mask)
    while True:
        nxt = lambda_step_mask(g, cur)
        if nxt == cur:
            return cur
        cur = nxt


def lambda_levels(g: Graph, X) -> list[VertexSet]:
    """``[Lambda_0(X), Lambda_1(X), ...]`` up to the first repeat."""
    cur = tree_mask(g, g.mask_of(X))
    out = [VertexSet(g, cur)]
    while True:
        nxt = lambda_step_mask(g, cur)
        if nxt == cur:
            return out
        out.append(VertexSet(g, nxt))
        cur = nxt


def closure(g: Graph, X) -> VertexSet:
    """Hereditary saturated closure of ``X``.

    On a generated graph the result is also computed one level deeper; if it
    spills past the current truncation the fixpoint is not visible at this
    depth and :class:`DepthLimitError` is raised.
    """
    m = g.mask_of(X)
    result = VertexSet(g, closure_mask(g, m))
    result._hereditary = result._saturated = True
    if g.origin is not None:
        deeper = g.origin.at_depth(g.origin.depth + 1)
        dm = closure_mask(deeper, deeper.mask_of(g.ids_of(m)))
        if set(deeper.ids_of(dm)) != set(result.ids):
            raise DepthLimitError(
                f"closure is not stable at depth {g.origin.depth}; increase --depth"
            )
    return result


# ----- the lattice H_E -------------------------------------------------------------


def hereditary_masks(g: Graph):
    """Every hereditary subset of ``E^0`` as a mask.

    Walks the vertices in order, deciding membership; including ``v`` forces
    ``T(v)`` in, excluding it forces out every vertex that reaches ``v``.
    """
    n = len(g.vertices)
    reach, coreach = g.reach, g.coreach

    def walk(i, inc, exc):
        while i < n and (inc | exc) >> i & 1:
            i += 1
        if i == n:
            yield inc
            return
        new_inc = inc | reach[i]
        if new_inc & exc == 0:
            yield from walk(i + 1, new_inc, exc)
        new_exc = exc | coreach[i]
        if new_exc & inc == 0:
            yield from walk(i + 1, inc, new_exc)

    yield from walk(0, 0, 0)


def _mask_key(mask: int):
    return (bin(mask).count("1"), tuple(iter_bits(mask)))


def hersat_masks(g: Graph, cap: int = DEFAULT_LATTICE_CAP) -> list[int]:
    if len(g.vertices) > cap:
        raise ResourceCapError(
            f"lattice enumeration needs at most {cap} vertices, graph has {len(g.vertices)}"
        )
    found = [m for m in hereditary_masks(g) if mask_is_saturated(g, m)]
    found.sort(key=_mask_key)
    return found


class Lattice:
    """All hereditary saturated subsets, smallest first, with meet and join."""

    def __init__(self, graph: Graph, masks: list[int]):
        self.graph = graph
        self.masks = tuple(masks)
        self._pos = {m: k for k, m in enumerate(self.masks)}

    def __len__(self):
        return len(self.masks)

    def __iter__(self):
        for m in self.masks:
            yield self._wrap(m)

    def __getitem__(self, k) -> VertexSet:
        return self._wrap(self.masks[k])

    def __contains__(self, S) -> bool:
        return self.graph.mask_of(S) in self._pos

    def _wrap(self, m: int) -> VertexSet:
        vs = VertexSet(self.graph, m)
        vs._hereditary = vs._saturated = True
        return vs

    def index(self, S) -> int:
        return self._pos[self.graph.mask_of(S)]

    def meet(self, A, B) -> VertexSet:
        return self._wrap(self.graph.mask_of(A) & self.graph.mask_of(B))

    def join(self, A, B) -> VertexSet:
        return self._wrap(closure_mask(self.graph, self.graph.mask_of(A) | self.graph.mask_of(B)))

    def leq(self, A, B) -> bool:
        return self.graph.mask_of(A) & ~self.graph.mask_of(B) == 0

    def tables(self) -> tuple[list[list[int]], list[list[int]]]:
        """Meet and join as index tables over the lattice order."""
        g = self.graph
        meet = [[self._pos[a & b] for b in self.masks] for a in self.masks]
        join = [[self._pos[closure_mask(g, a | b)] for b in self.masks] for a in self.masks]
        return meet, join

    def as_lists(self) -> list[list[str]]:
        return [list(self.graph.ids_of(m)) for m in self.masks]


def enumerate_lattice(g: Graph, cap: int = DEFAULT_LATTICE_CAP) -> Lattice:
    return Lattice(g, hersat_masks(g, cap))


# ----- quotient and restriction graphs ------------------------------------------------


def quotient_graph(g: Graph, H) -> Graph:
    """``E/H``: vertices outside ``H`` and the edges whose range avoids ``H``."""
    h = g.mask_of(H)
    if not mask_is_hereditary(g, h):
        raise PreconditionError("quotient needs a hereditary set")
    keep = [k for k, r in enumerate(g.rng) if not h >> r & 1]
    return g.subgraph(g.full_mask & ~h, keep, f"quotient by {{{', '.join(g.ids_of(h))}}}")


def restriction_graph(g: Graph, H) -> Graph:
    """``E_H``: vertices of ``H`` and the edges whose source lies in ``H``."""
    h = g.mask_of(H)
    keep = [k for k, s in enumerate(g.src) if h >> s & 1]
    if any(not h >> g.rng[k] & 1 for k in keep):
        raise PreconditionError("restriction needs a hereditary set")
    return g.subgraph(h, keep, f"restriction to {{{', '.join(g.ids_of(h))}}}")


def quotient_mask_graph(g: Graph, h: int) -> Graph:
    keep = [k for k, r in enumerate(g.rng) if not h >> r & 1]
    return g.subgraph(g.full_mask & ~h, keep)


def restriction_mask_graph(g: Graph, h: int) -> Graph:
    keep = [k for k, s in enumerate(g.src) if h >> s & 1]
    return g.subgraph(h, keep)


# ----- cofinality ---------------------------------------------------------------------


@dataclass(frozen=True)
class CofinalityResult:
    cofinal: bool
    lattice_verdict: Optional[bool]
    vertex: Optional[str] = None
    avoided: Optional[str] = None
    avoided_kind: Optional[str] = None
    label: Optional[str] = None

    def __bool__(self):
        return self.cofinal


def _direct_cofinal(g: Graph):
    sink_mask = g.full_mask & ~g.emit_mask
    for i, v in enumerate(g.vertices):
        outside = g.full_mask & ~g.reach[i]
        stray_sinks = outside & sink_mask
        if stray_sinks:
            j = next(iter_bits(stray_sinks))
            return False, v, g.vertices[j], "sink"
        j = cycle_vertex_within(g, outside)
        if j is not None:
            return False, v, g.vertices[j], "cycle"
    return True, None, None, None


def is_cofinal(g: Graph, cap: int = DEFAULT_LATTICE_CAP) -> CofinalityResult:
    """Decide cofinality twice: directly, and as triviality of the lattice.

    Directly: no vertex ``v`` may leave outside ``T(v)`` a sink of ``E`` or a
    cycle, since either yields a path in ``E^{<=inf}`` that ``v`` never meets.
    """
    ok, v, w, kind = _direct_cofinal(g)
    label = g.depth_label
    try:
        masks = hersat_masks(g, cap)
    except ResourceCapError:
        return CofinalityResult(ok, None, v, w, kind, "lattice cap exceeded; direct criterion only")
    trivial = set(masks) <= {0, g.full_mask}
    if trivial != ok:
        raise InvariantFailure(
            f"cofinality algorithms disagree: direct={ok}, lattice={trivial}"
        )
    return CofinalityResult(ok, trivial, v, w, kind, label)


def projsather_check(g: Graph, H, X) -> tuple[bool, bool]:
    """``(X in H_E, X in H_{E_H})`` for ``X`` inside a hereditary saturated ``H``."""
    h, x = g.mask_of(H), g.mask_of(X)
    if not (mask_is_hereditary(g, h) and mask_is_saturated(g, h)):
        raise PreconditionError("H must be hereditary and saturated")
    if x & ~h:
        raise PreconditionError("X must be contained in H")
    sub = restriction_mask_graph(g, h)
    xs = sub.mask_of(g.ids_of(x))
    in_e = mask_is_hereditary(g, x) and mask_is_saturated(g, x)
    in_sub = mask_is_hereditary(sub, xs) and mask_is_saturated(sub, xs)
    return in_e, in_sub
