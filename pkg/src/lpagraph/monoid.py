"""The graph monoid, comparability search, graph traces and left-infinite vertices.

The graph monoid has one generator per vertex and one relation
``v = sum of r(e) over s(e) = v`` per non-sink.  Equality and the order
``a <= b  iff  a + c = b for some c`` are searched by breadth-first rewriting
under a cap on total multiplicity.  Answers are three-valued; every ``YES``
carries a derivation that :func:`replay` checks step by step, and ``NO``
is only returned when the reachable class was explored without ever
touching the cap.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional, Union

from .errors import PreconditionError
from .graph import Graph, csp_class, mask_is_hereditary
from .hersat import quotient_mask_graph
from .lp import feasible_point

DEFAULT_BOUND = 24
DEFAULT_MAX_STATES = 200_000


class MonoidElement:
    """A finitely supported map vertex -> non-negative integer."""

    __slots__ = ("_items",)

    def __init__(self, counts: Union[Mapping[str, int], Iterable[tuple[str, int]]] = ()):
        items = counts.items() if isinstance(counts, Mapping) else counts
        acc: dict[str, int] = {}
        for v, n in items:
            if not isinstance(n, int) or n < 0:
                raise ValueError(f"multiplicity of {v!r} must be a non-negative integer")
            acc[v] = acc.get(v, 0) + n
        self._items = tuple(sorted((v, n) for v, n in acc.items() if n))

    @classmethod
    def of(cls, *vertices: str) -> "MonoidElement":
        acc: dict[str, int] = {}
        for v in vertices:
            acc[v] = acc.get(v, 0) + 1
        return cls(acc)

    @classmethod
    def parse(cls, text: str) -> "MonoidElement":
        """``"v:2,w"`` -> 2[v] + [w]; the empty string is zero."""
        acc: dict[str, int] = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            v, _, n = part.partition(":")
            acc[v.strip()] = acc.get(v.strip(), 0) + (int(n) if n else 1)
        return cls(acc)

    def as_dict(self) -> dict[str, int]:
        return dict(self._items)

    def __getitem__(self, v: str) -> int:
        return dict(self._items).get(v, 0)

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self._items)

    @property
    def total(self) -> int:
        return sum(n for _, n in self._items)

    def __add__(self, other: "MonoidElement") -> "MonoidElement":
        return MonoidElement(self._items + other._items)

    def __sub__(self, other: "MonoidElement") -> "MonoidElement":
        mine = self.as_dict()
        for v, n in other._items:
            if mine.get(v, 0) < n:
                raise ValueError("difference would be negative")
            mine[v] -= n
        return MonoidElement(mine)

    def __mul__(self, k: int) -> "MonoidElement":
        return MonoidElement({v: n * k for v, n in self._items})

    __rmul__ = __mul__

    def __le__(self, other: "MonoidElement") -> bool:
        theirs = other.as_dict()
        return all(theirs.get(v, 0) >= n for v, n in self._items)

    def __eq__(self, other):
        return isinstance(other, MonoidElement) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __bool__(self):
        return bool(self._items)

    def __repr__(self):
        return "MonoidElement(" + self.format() + ")"

    def format(self) -> str:
        if not self._items:
            return "0"
        return " + ".join(v if n == 1 else f"{n}{v}" for v, n in self._items)

    def to_vector(self, g: Graph) -> tuple[int, ...]:
        vec = [0] * len(g.vertices)
        for v, n in self._items:
            vec[g.vid(v)] += n
        return tuple(vec)

    @classmethod
    def from_vector(cls, g: Graph, vec) -> "MonoidElement":
        return cls({g.vertices[i]: n for i, n in enumerate(vec) if n})

    @classmethod
    def of_set(cls, vertices: Iterable[str]) -> "MonoidElement":
        return cls({v: 1 for v in vertices})


# ----- relations and rewrite steps --------------------------------------------------


@dataclass(frozen=True)
class Relation:
    vertex: str
    ranges: MonoidElement

    def format(self) -> str:
        return f"{self.vertex} <-> {self.ranges.format()}"


def monoid_relations(g: Graph) -> list[Relation]:
    rels = []
    for i, v in enumerate(g.vertices):
        out = g.out_idx[i]
        if out:
            rels.append(Relation(v, MonoidElement.of(*(g.vertices[g.rng[k]] for k in out))))
    return rels


@dataclass(frozen=True)
class Step:
    """Replace ``[vertex]`` by its relation's right side (expand) or back (contract)."""

    vertex: str
    direction: str
    result: MonoidElement

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "direction": self.direction, "result": self.result.as_dict()}


@dataclass(frozen=True)
class Derivation:
    start: MonoidElement
    end: MonoidElement
    steps: tuple[Step, ...] = ()

    def to_json(self) -> dict:
        return {
            "start": self.start.as_dict(),
            "end": self.end.as_dict(),
            "steps": [s.to_json() for s in self.steps],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Derivation":
        steps = tuple(Step(s["vertex"], s["direction"], MonoidElement(s["result"])) for s in doc["steps"])
        return cls(MonoidElement(doc["start"]), MonoidElement(doc["end"]), steps)


def replay(g: Graph, d: Derivation) -> bool:
    """Apply each recorded step to ``d.start``; True iff every step is legal and lands on ``d.end``."""
    rels = {r.vertex: r.ranges for r in monoid_relations(g)}
    cur = d.start
    for step in d.steps:
        rhs = rels.get(step.vertex)
        if rhs is None:
            return False
        one = MonoidElement({step.vertex: 1})
        if step.direction == "expand":
            if not one <= cur:
                return False
            cur = (cur - one) + rhs
        elif step.direction == "contract":
            if not rhs <= cur:
                return False
            cur = (cur - rhs) + one
        else:
            return False
        if cur != step.result:
            return False
    return cur == d.end


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchAnswer:
    verdict: Verdict
    bound: int
    derivation: Optional[Derivation] = None
    complement: Optional[MonoidElement] = None
    explored: int = 0
    reason: str = ""

    def __bool__(self):
        return self.verdict is Verdict.YES


class _Rewriter:
    def __init__(self, g: Graph, bound: int, max_states: int):
        self.g = g
        self.bound = bound
        self.max_states = max_states
        n = len(g.vertices)
        self.rules = []
        for i in range(n):
            out = g.out_idx[i]
            if out:
                rhs = [0] * n
                for k in out:
                    rhs[g.rng[k]] += 1
                self.rules.append((i, tuple(rhs), len(out)))

    def neighbours(self, state: tuple[int, ...]):
        """``(vertex index, direction, new state)``; the flag reports a move dropped by the cap."""
        total = sum(state)
        blocked = False
        out = []
        for i, rhs, size in self.rules:
            if state[i] > 0:
                if total - 1 + size > self.bound:
                    blocked = True
                else:
                    new = list(state)
                    new[i] -= 1
                    for j, c in enumerate(rhs):
                        new[j] += c
                    out.append((i, "expand", tuple(new)))
            if all(s >= c for s, c in zip(state, rhs)):
                new = [s - c for s, c in zip(state, rhs)]
                new[i] += 1
                out.append((i, "contract", tuple(new)))
        return out, blocked


def _chain(parent, state):
    """Moves from the search root to ``state`` as ``(vertex index, direction, state after)``."""
    moves = []
    while parent[state] is not None:
        prev, i, direction = parent[state]
        moves.append((i, direction, state))
        state = prev
    moves.reverse()
    return moves


_FLIP = {"expand": "contract", "contract": "expand"}


def _reverse_chain(parent, state):
    """Moves from ``state`` back to the search root."""
    moves = []
    while parent[state] is not None:
        prev, i, direction = parent[state]
        moves.append((i, _FLIP[direction], prev))
        state = prev
    return moves


def _derivation(g, start_vec, moves, end_vec) -> Derivation:
    steps = tuple(Step(g.vertices[i], d, MonoidElement.from_vector(g, s)) for i, d, s in moves)
    return Derivation(MonoidElement.from_vector(g, start_vec), MonoidElement.from_vector(g, end_vec), steps)


def monoid_equal(g: Graph, a: MonoidElement, b: MonoidElement, bound: int = DEFAULT_BOUND,
                 max_states: int = DEFAULT_MAX_STATES) -> SearchAnswer:
    """Decide ``a = b`` in the graph monoid by bidirectional breadth-first rewriting."""
    va, vb = a.to_vector(g), b.to_vector(g)
    if va == vb:
        return SearchAnswer(Verdict.YES, bound, Derivation(a, b))
    if sum(va) > bound or sum(vb) > bound:
        return SearchAnswer(Verdict.UNKNOWN, bound, reason="input exceeds the bound")
    rw = _Rewriter(g, bound, max_states)
    sides = [
        {"parent": {va: None}, "frontier": [va], "blocked": False},
        {"parent": {vb: None}, "frontier": [vb], "blocked": False},
    ]
    explored = 2
    while True:
        for idx, side in enumerate(sides):
            if not side["frontier"] and not side["blocked"]:
                return SearchAnswer(Verdict.NO, bound, explored=explored,
                                    reason="equivalence class exhausted")
        live = [k for k in (0, 1) if sides[k]["frontier"]]
        if not live:
            return SearchAnswer(Verdict.UNKNOWN, bound, explored=explored, reason="bound reached")
        k = min(live, key=lambda j: len(sides[j]["frontier"]))
        side, other = sides[k], sides[1 - k]
        nxt = []
        for state in side["frontier"]:
            moves, blocked = rw.neighbours(state)
            side["blocked"] |= blocked
            for i, direction, new in moves:
                if new in side["parent"]:
                    continue
                side["parent"][new] = (state, i, direction)
                explored += 1
                if new in other["parent"]:
                    fwd, bwd = (side, other) if k == 0 else (other, side)
                    moves_a = _chain(fwd["parent"], new)
                    moves_b = _reverse_chain(bwd["parent"], new)
                    return SearchAnswer(Verdict.YES, bound, _derivation(g, va, moves_a + moves_b, vb),
                                        explored=explored)
                if explored > max_states:
                    return SearchAnswer(Verdict.UNKNOWN, bound, explored=explored,
                                        reason="state budget exhausted")
                nxt.append(new)
        side["frontier"] = nxt


def monoid_leq(g: Graph, a: MonoidElement, b: MonoidElement, bound: int = DEFAULT_BOUND,
               max_states: int = DEFAULT_MAX_STATES) -> SearchAnswer:
    """Decide ``a <= b``: search the class of ``b`` for a representative dominating ``a``.

    The certificate is the complement ``c`` and a derivation from ``a + c`` to ``b``.
    """
    va, vb = a.to_vector(g), b.to_vector(g)
    if sum(vb) > bound:
        return SearchAnswer(Verdict.UNKNOWN, bound, reason="input exceeds the bound")
    rw = _Rewriter(g, bound, max_states)
    parent = {vb: None}
    frontier = [vb]
    blocked = False

    def found(state):
        moves = _reverse_chain(parent, state)
        c = tuple(s - x for s, x in zip(state, va))
        d = _derivation(g, state, moves, vb)
        return SearchAnswer(Verdict.YES, bound, d, MonoidElement.from_vector(g, c), len(parent))

    if all(s >= x for s, x in zip(vb, va)):
        return found(vb)
    while frontier:
        nxt = []
        for state in frontier:
            moves, hit = rw.neighbours(state)
            blocked |= hit
            for i, direction, new in moves:
                if new in parent:
                    continue
                parent[new] = (state, i, direction)
                if all(s >= x for s, x in zip(new, va)):
                    return found(new)
                if len(parent) > max_states:
                    return SearchAnswer(Verdict.UNKNOWN, bound, explored=len(parent),
                                        reason="state budget exhausted")
                nxt.append(new)
        frontier = nxt
    if blocked:
        return SearchAnswer(Verdict.UNKNOWN, bound, explored=len(parent), reason="bound reached")
    return SearchAnswer(Verdict.NO, bound, explored=len(parent), reason="equivalence class exhausted")


def leq_replays(g: Graph, a: MonoidElement, ans: SearchAnswer) -> bool:
    """A YES from :func:`monoid_leq` is a valid certificate that ``a <= ans.derivation.end``."""
    d = ans.derivation
    return d is not None and d.start == a + ans.complement and replay(g, d)


# ----- graph traces --------------------------------------------------------------------


@dataclass(frozen=True)
class TraceVector:
    values: dict

    @property
    def norm(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def is_trace_on(self, g: Graph) -> bool:
        if any(x < 0 for x in self.values.values()):
            return False
        for i, v in enumerate(g.vertices):
            out = g.out_idx[i]
            if out and self.values[v] != sum((self.values[g.vertices[g.rng[k]]] for k in out), Fraction(0)):
                return False
        return True


def trace_equations(g: Graph) -> list[list[int]]:
    """One row per non-sink: ``g(v) - sum over out-edges of g(r(e)) = 0``."""
    n = len(g.vertices)
    rows = []
    for i in range(n):
        out = g.out_idx[i]
        if out:
            row = [0] * n
            row[i] += 1
            for k in out:
                row[g.rng[k]] -= 1
            rows.append(row)
    return rows


def trace_solve(g: Graph) -> Optional[TraceVector]:
    """A graph trace of norm 1, or None when the zero function is the only trace."""
    n = len(g.vertices)
    if n == 0:
        return None
    A = trace_equations(g) + [[1] * n]
    b = [0] * (len(A) - 1) + [1]
    x = feasible_point(A, b)
    if x is None:
        return None
    return TraceVector(dict(zip(g.vertices, x)))


# ----- left-infinite vertices --------------------------------------------------------


@dataclass(frozen=True)
class LeftReach:
    vertex: str
    members: tuple[str, ...]
    finite: bool
    grows: bool
    depth: Optional[int] = None


def left_reach(g: Graph, v: str, depth: Optional[int] = None) -> LeftReach:
    """``L(v) = {w : w >= v}``.

    On a generated graph the set is taken in the truncation at ``depth`` (by
    default the graph's own) and compared with one level deeper; ``grows``
    means the deeper truncation adds members.
    """
    if g.origin is None:
        i = g.vid(v)
        return LeftReach(v, g.ids_of(g.coreach[i]), True, False)
    d = g.origin.depth if depth is None else depth
    here = g if d == g.origin.depth else g.origin.at_depth(d)
    deeper = g.origin.at_depth(d + 1)
    members = here.ids_of(here.coreach[here.vid(v)])
    more = deeper.ids_of(deeper.coreach[deeper.vid(v)])
    grows = len(more) > len(members)
    return LeftReach(v, members, not grows, grows, d)


# ----- hypotheses checks ---------------------------------------------------------------


@dataclass(frozen=True)
class TomfordeAnswer:
    hypotheses_hold: bool
    cycles_left_infinite: bool
    no_nonzero_trace: bool
    verdict: Optional[Verdict] = None
    W: Optional[tuple[str, ...]] = None
    answer: Optional[SearchAnswer] = None
    failing_vertex: Optional[str] = None
    trace: Optional[TraceVector] = None


def tomforde_check(g: Graph, V, bound: int = DEFAULT_BOUND, max_w: int = 3) -> TomfordeAnswer:
    """Look for a finite ``W`` disjoint from ``V`` with ``sum V <= sum W``, once the
    hypotheses (vertices on closed simple paths are left infinite, no nonzero
    bounded trace) are confirmed."""
    vmask = g.mask_of(V)
    failing = None
    for v in g.vertices:
        if csp_class(g, v).nonzero and not left_reach(g, v).grows:
            failing = v
            break
    trace = trace_solve(g)
    lefts_ok, trace_ok = failing is None, trace is None
    if not (lefts_ok and trace_ok):
        return TomfordeAnswer(False, lefts_ok, trace_ok, failing_vertex=failing, trace=trace)
    target = MonoidElement.of_set(g.ids_of(vmask))
    rest = [v for i, v in enumerate(g.vertices) if not vmask >> i & 1]
    saw_unknown = False
    for size in range(1, min(max_w, len(rest)) + 1):
        for W in combinations(rest, size):
            ans = monoid_leq(g, target, MonoidElement.of_set(W), bound)
            if ans.verdict is Verdict.YES:
                return TomfordeAnswer(True, True, True, Verdict.YES, W, ans)
            saw_unknown |= ans.verdict is Verdict.UNKNOWN
    verdict = Verdict.UNKNOWN if saw_unknown or g.origin is not None else Verdict.NO
    return TomfordeAnswer(True, True, True, verdict)


@dataclass(frozen=True)
class QuasistableRow:
    n: int
    verdict: Verdict
    m: Optional[int] = None
    answer: Optional[SearchAnswer] = None
    reason: str = ""


def unit(g: Graph, n: int) -> MonoidElement:
    """``[p_n]``: the sum of the first ``n`` vertices in declared order."""
    return MonoidElement.of_set(g.vertices[:n])


def quasistable_check(g: Graph, bound: int = DEFAULT_BOUND,
                      ns: Optional[Iterable[int]] = None) -> list[QuasistableRow]:
    """For each ``n``, search ``m > n`` with ``p_n <= p_m - p_n`` in the graph monoid."""
    N = len(g.vertices)
    rows = []
    for n in (range(1, N + 1) if ns is None else ns):
        pn = unit(g, n)
        row = None
        unknown = None
        for m in range(n + 1, N + 1):
            ans = monoid_leq(g, pn, MonoidElement.of_set(g.vertices[n:m]), bound)
            if ans.verdict is Verdict.YES:
                row = QuasistableRow(n, Verdict.YES, m, ans)
                break
            if ans.verdict is Verdict.UNKNOWN and unknown is None:
                unknown = QuasistableRow(n, Verdict.UNKNOWN, m, ans, ans.reason)
        if row is None:
            if unknown is not None:
                row = unknown
            elif g.origin is not None:
                row = QuasistableRow(n, Verdict.UNKNOWN, reason=f"no m > n at depth {g.origin.depth}")
            else:
                row = QuasistableRow(n, Verdict.NO, reason="every m > n exhausted")
        rows.append(row)
    return rows


@dataclass(frozen=True)
class LiftAnswer:
    verdict: Verdict
    X: Optional[tuple[str, ...]] = None
    quotient_answer: Optional[SearchAnswer] = None
    answer: Optional[SearchAnswer] = None


def quotient_lift_check(g: Graph, H, e: MonoidElement, W, bound: int = DEFAULT_BOUND,
                        max_x: int = 3) -> LiftAnswer:
    """Given ``[e] <= sum W`` in the monoid of ``E/H``, find a finite ``X`` in ``H``
    with ``[e] <= sum W + sum X`` in the monoid of ``E``."""
    h = g.mask_of(H)
    if not mask_is_hereditary(g, h):
        raise PreconditionError("H must be hereditary")
    wmask = g.mask_of(W)
    if wmask & h or g.mask_of(e.support) & h:
        raise PreconditionError("e and W must be supported outside H")
    Q = quotient_mask_graph(g, h)
    w_elem = MonoidElement.of_set(g.ids_of(wmask))
    q_ans = monoid_leq(Q, e, w_elem, bound)
    if q_ans.verdict is not Verdict.YES:
        raise PreconditionError(f"comparison does not hold in the quotient ({q_ans.verdict.value})")
    inside = list(g.ids_of(h))
    saw_unknown = False
    for size in range(0, min(max_x, len(inside)) + 1):
        for X in combinations(inside, size):
            ans = monoid_leq(g, e, w_elem + MonoidElement.of_set(X), bound)
            if ans.verdict is Verdict.YES:
                return LiftAnswer(Verdict.YES, X, q_ans, ans)
            saw_unknown |= ans.verdict is Verdict.UNKNOWN
    return LiftAnswer(Verdict.UNKNOWN if saw_unknown else Verdict.NO, None, q_ans)


__all__ = [
    "MonoidElement", "Relation", "Step", "Derivation", "Verdict", "SearchAnswer",
    "monoid_relations", "monoid_equal", "monoid_leq", "replay", "leq_replays",
    "TraceVector", "trace_solve", "trace_equations", "LeftReach", "left_reach",
    "TomfordeAnswer", "tomforde_check", "QuasistableRow", "quasistable_check", "unit",
    "LiftAnswer", "quotient_lift_check",
]
