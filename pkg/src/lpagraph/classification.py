"""Ring-level verdicts read off the graph: exchange, maximal tails and primes,
purely infinite simple quotients, and the stable rank (1, 2 or infinity)."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .errors import DepthLimitError, InvariantFailure, PreconditionError, ResourceCapError
from .graph import (
    Graph,
    VertexSet,
    condition_K,
    condition_L,
    cycle_vertex_within,
    iter_bits,
    is_acyclic,
    mask_is_hereditary,
    mask_is_saturated,
)
from .hersat import (
    DEFAULT_LATTICE_CAP,
    _direct_cofinal,
    closure_mask,
    hersat_masks,
    quotient_mask_graph,
    restriction_mask_graph,
)


def is_exchange(g: Graph) -> bool:
    """The Leavitt path algebra is an exchange ring exactly when (K) holds."""
    return bool(condition_K(g))


@dataclass(frozen=True)
class ExchangeAudit:
    quotients_have_L: bool  # E/H has (L) for every H
    condition_K: bool
    all_parts_have_K: bool  # E_H and E/H have (K) for every H
    some_parts_have_K: bool  # ... for at least one H
    lattice_size: int
    first_failure: Optional[tuple[str, ...]] = None  # an H where E/H lacks (L)

    @property
    def verdicts(self) -> tuple[bool, bool, bool, bool]:
        return (self.quotients_have_L, self.condition_K, self.all_parts_have_K, self.some_parts_have_K)

    @property
    def agree(self) -> bool:
        return len(set(self.verdicts)) == 1


def exchange_equivalence_audit(g: Graph, cap: int = DEFAULT_LATTICE_CAP) -> ExchangeAudit:
    """Evaluate the four graph-side conditions equivalent to the exchange property
    independently, and fail loudly if they do not agree."""
    masks = hersat_masks(g, cap)
    all_L, all_K, some_K = True, True, False
    first = None
    for h in masks:
        Q = quotient_mask_graph(g, h)
        has_L = bool(condition_L(Q))
        if not has_L and all_L:
            all_L, first = False, g.ids_of(h)
        both_K = bool(condition_K(Q)) and bool(condition_K(restriction_mask_graph(g, h)))
        all_K &= both_K
        some_K |= both_K
    audit = ExchangeAudit(all_L, bool(condition_K(g)), all_K, some_K, len(masks), first)
    if not audit.agree:
        raise InvariantFailure(f"exchange conditions disagree: {audit.verdicts}")
    return audit


# ----- maximal tails and prime ideals ----------------------------------------------------


@dataclass(frozen=True)
class TailSet:
    members: tuple[str, ...]
    backward_closed: bool  # MT1
    can_step_inside: bool  # MT2
    directed: bool  # MT3

    @property
    def flags(self) -> tuple[bool, bool, bool]:
        return (self.backward_closed, self.can_step_inside, self.directed)

    @property
    def is_maximal_tail(self) -> bool:
        return bool(self.members) and all(self.flags)


def tail_flags(g: Graph, m: int) -> tuple[bool, bool, bool]:
    mt1 = all(g.coreach[i] & ~m == 0 for i in iter_bits(m))
    mt2 = all(not g.out_idx[i] or g.succ[i] & m for i in iter_bits(m))
    mt3 = True
    members = list(iter_bits(m))
    for a, i in enumerate(members):
        for j in members[a:]:
            if not g.reach[i] & g.reach[j] & m:
                mt3 = False
                break
        if not mt3:
            break
    return mt1, mt2, mt3


def tail_set(g: Graph, M) -> TailSet:
    m = g.mask_of(M)
    return TailSet(g.ids_of(m), *tail_flags(g, m))


def maximal_tails(g: Graph, cap: int = DEFAULT_LATTICE_CAP) -> list[TailSet]:
    """Every maximal tail, found as a complement of a lattice member that passes MT3."""
    out = []
    for h in hersat_masks(g, cap):
        m = g.full_mask & ~h
        if not m:
            continue
        t = TailSet(g.ids_of(m), *tail_flags(g, m))
        if not (t.backward_closed and t.can_step_inside):
            raise InvariantFailure(f"complement of {g.ids_of(h)} fails MT1/MT2")
        if t.directed:
            out.append(t)
    return out


@dataclass(frozen=True)
class PrimeEntry:
    H: tuple[str, ...]
    is_prime: bool


@dataclass(frozen=True)
class PrimeReport:
    entries: tuple[PrimeEntry, ...]
    caveat: Optional[str] = None


def prime_ideal_report(g: Graph, cap: int = DEFAULT_LATTICE_CAP) -> PrimeReport:
    entries = []
    for h in hersat_masks(g, cap):
        m = g.full_mask & ~h
        if not m:
            continue
        entries.append(PrimeEntry(g.ids_of(h), all(tail_flags(g, m))))
    caveat = None
    if not condition_K(g):
        caveat = "condition (K) fails: ideal lattice may exceed graded lattice"
    return PrimeReport(tuple(entries), caveat)


# ----- purely infinite simple quotients ---------------------------------------------------


def _quotient_qualifies(g: Graph, h: int) -> bool:
    Q = quotient_mask_graph(g, h)
    if Q.is_empty or Q.emit_mask != Q.full_mask:
        return False
    return _direct_cofinal(Q)[0]


def _quotient_grows(g: Graph, h: int) -> bool:
    """For a truncation: does ``E/H`` pick up vertices one level deeper?"""
    deeper = g.origin.at_depth(g.origin.depth + 1)
    dh = closure_mask(deeper, deeper.mask_of(g.ids_of(h)))
    return len(deeper.vertices) - bin(dh).count("1") > len(g.vertices) - bin(h).count("1")


@dataclass(frozen=True)
class PisWitness:
    H: Optional[tuple[str, ...]]
    searched: int
    exhaustive: bool
    depth: Optional[int] = None
    rejected_as_infinite: int = 0


def pis_quotient_search(g: Graph, cap: int = DEFAULT_LATTICE_CAP) -> PisWitness:
    """Search the lattice, smallest first, for ``H`` with ``E/H`` nonempty,
    finite, cofinal and without sinks."""
    if not condition_K(g):
        raise PreconditionError("purely infinite simple quotient criterion requires condition (K)")
    masks = hersat_masks(g, cap)
    grown = 0
    for h in masks:
        if _quotient_qualifies(g, h):
            if g.origin is not None and _quotient_grows(g, h):
                grown += 1
                continue
            return PisWitness(g.ids_of(h), len(masks), g.origin is None,
                              g.origin.depth if g.origin else None, grown)
    return PisWitness(None, len(masks), g.origin is None,
                      g.origin.depth if g.origin else None, grown)


def pis_quotient_witness(g: Graph, cap: int = DEFAULT_LATTICE_CAP) -> Optional[VertexSet]:
    w = pis_quotient_search(g, cap)
    return None if w.H is None else g.vset(w.H)


# ----- X_0 ---------------------------------------------------------------------------------------


def x0_mask(g: Graph) -> int:
    out = 0
    for i in range(len(g.vertices)):
        back = [k for k in g.out_idx[i] if g.coreach[i] >> g.rng[k] & 1]
        if len(back) >= 2:
            out |= 1 << i
    return out


@dataclass(frozen=True)
class X0:
    X0: VertexSet
    closure: VertexSet
    stable: bool = True  # False when a generated graph's closure moves with depth


def x0_set(g: Graph) -> X0:
    """Vertices emitting two distinct edges that both return, and their closure."""
    m = x0_mask(g)
    c = closure_mask(g, m)
    stable = True
    if g.origin is not None:
        deeper = g.origin.at_depth(g.origin.depth + 1)
        dc = closure_mask(deeper, deeper.mask_of(g.ids_of(m)))
        stable = set(deeper.ids_of(dc)) == set(g.ids_of(c))
    return X0(g.vset(m), g.vset(c), stable)


# ----- stable rank ----------------------------------------------------------------------------


class Rank(enum.Enum):
    ONE = "1"
    TWO = "2"
    TWO_AT_BOUND = "2-at-bound"
    INFINITE = "inf"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class StableRankVerdict:
    value: Rank
    basis: str
    depth: Optional[int] = None
    witness: Optional[tuple[str, ...]] = None
    reason: Optional[str] = None


def stable_rank(g: Graph, cap: int = DEFAULT_LATTICE_CAP) -> StableRankVerdict:
    depth = g.origin.depth if g.origin is not None else None
    if not condition_K(g):
        return StableRankVerdict(Rank.UNKNOWN, "hypothesis", depth,
                                 reason="trichotomy requires condition (K)")
    if is_acyclic(g):
        return StableRankVerdict(Rank.ONE, "acyclic-witness", depth)
    w = pis_quotient_search(g, cap)
    if w.H is not None:
        return StableRankVerdict(Rank.INFINITE, "pis-quotient-witness", depth, w.H)
    if g.origin is None:
        return StableRankVerdict(Rank.TWO, "exhaustion-evidence", None,
                                 reason=f"no qualifying quotient among {w.searched} lattice members")
    return StableRankVerdict(
        Rank.TWO_AT_BOUND, "exhaustion-evidence", depth,
        reason=f"no finite qualifying quotient at depth {depth}; "
               f"{w.rejected_as_infinite} candidates grow with depth",
    )


def finite_rank_shortcut(g: Graph) -> Rank:
    """On a finite graph with (K): 1 when acyclic, infinity otherwise.

    A cyclic finite graph with (K) always has a qualifying quotient: take a
    cyclic strong component that no other cyclic component reaches, and
    quotient by everything that does not reach it.
    """
    if not condition_K(g):
        return Rank.UNKNOWN
    return Rank.ONE if is_acyclic(g) else Rank.INFINITE


# ----- the aggregate report -----------------------------------------------------------------


@dataclass
class ClassificationReport:
    condition_L: bool
    condition_K: bool
    exchange: bool
    lattice_size: Optional[int]
    lattice: Optional[list] = None
    maximal_tails: Optional[list] = None
    pis_witness: Optional[tuple[str, ...]] = None
    x0: tuple[str, ...] = ()
    x0_closure: tuple[str, ...] = ()
    stable_rank: Optional[StableRankVerdict] = None
    annotations: list[str] = field(default_factory=list)
    depth: Optional[int] = None
    notes: list[str] = field(default_factory=list)


def classify(g: Graph, cap: int = DEFAULT_LATTICE_CAP) -> ClassificationReport:
    L, K = bool(condition_L(g)), bool(condition_K(g))
    depth = g.origin.depth if g.origin is not None else None
    rep = ClassificationReport(L, K, K, None, depth=depth)
    masks = None
    try:
        masks = hersat_masks(g, cap)
    except ResourceCapError as exc:
        rep.notes.append(str(exc))
    if masks is not None:
        rep.lattice_size = len(masks)
        rep.lattice = [list(g.ids_of(h)) for h in masks]
        rep.maximal_tails = [list(t.members) for t in maximal_tails(g, cap)]
        if K:
            rep.pis_witness = pis_quotient_search(g, cap).H
        rep.stable_rank = stable_rank(g, cap)
    elif not K:
        rep.stable_rank = stable_rank(g, cap)
    elif is_acyclic(g):
        rep.stable_rank = StableRankVerdict(Rank.ONE, "acyclic-witness", depth)
    x = x0_set(g)
    rep.x0, rep.x0_closure = x.X0.ids, x.closure.ids
    if not x.stable:
        rep.notes.append(f"closure of X0 is not stable at depth {depth}")
    if is_acyclic(g):
        if g.origin is None:
            rep.annotations.append("finite acyclic: the algebra is matricial")
        rep.annotations.append("acyclic: the algebra is locally matricial")
    if masks is not None:
        for h in masks:
            if h and h != g.full_mask:
                rep.annotations.append(
                    f"Morita: I({{{', '.join(g.ids_of(h))}}}) ~ L(restriction graph)"
                )
    if not K:
        rep.annotations.append("condition (K) fails: not an exchange ring; ideal lattice may exceed graded lattice")
    return rep


__all__ = [
    "is_exchange", "ExchangeAudit", "exchange_equivalence_audit",
    "TailSet", "tail_set", "tail_flags", "maximal_tails", "PrimeEntry", "PrimeReport",
    "prime_ideal_report", "PisWitness", "pis_quotient_search", "pis_quotient_witness",
    "X0", "x0_set", "x0_mask", "Rank", "StableRankVerdict", "stable_rank",
    "finite_rank_shortcut", "ClassificationReport", "classify",
]
