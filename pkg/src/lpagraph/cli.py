"""Command line interface: ``lpagraph <command> FILE [options]``.

Exit status: 0 success, 2 bad input or unmet precondition, 3 resource cap
or depth limit, 4 internal invariant failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Optional

from . import classification as cls
from . import constructions as con
from . import hersat, monoid
from .corpus import exhaustive, seeded
from .errors import InvariantFailure, LpaGraphError, ResourceCapError
from .graph import Graph
from .io import Report, dumps, error_document, export_dot, input_digest, read_graph, serialize, to_document

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4


def _ids(text: Optional[str]) -> list[str]:
    return [t.strip() for t in (text or "").split(",") if t.strip()]


def _fmt_set(ids) -> str:
    return "{" + ", ".join(ids) + "}"


# each handler fills the report and may return a graph for dot output


def cmd_validate(g: Graph, a, rep: Report):
    rep.add("validate", True, vertices=len(g.vertices), edges=len(g.edges))
    rep.note(f"valid graph: {len(g.vertices)} vertices, {len(g.edges)} edges")
    return g


def cmd_classify(g: Graph, a, rep: Report):
    r = cls.classify(g, a.lattice_cap)
    sr = r.stable_rank
    rep.add("condition_L", r.condition_L)
    rep.add("condition_K", r.condition_K)
    rep.add("is_exchange", r.exchange, "exchange iff condition (K)")
    rep.add("enumerate_lattice", r.lattice, parameters={"lattice_cap": a.lattice_cap}, size=r.lattice_size)
    rep.add("maximal_tails", r.maximal_tails)
    rep.add("pis_quotient_witness", r.pis_witness)
    rep.add("x0_set", {"X0": r.x0, "closure": r.x0_closure})
    if sr is not None:
        rep.add("stable_rank", sr.value, sr.basis, parameters={"depth": sr.depth},
                witness=sr.witness, reason=sr.reason)
    rep.add("annotations", r.annotations)
    for n in r.notes:
        rep.add("note", n)
    rep.note(f"condition (L): {r.condition_L}")
    rep.note(f"condition (K): {r.condition_K}")
    rep.note(f"exchange ring: {r.exchange}")
    rep.note(f"hereditary saturated sets: {r.lattice_size if r.lattice_size is not None else 'over cap'}")
    rep.note(f"stable rank: {sr.value.value if sr else 'not decided'}"
             + (f" (witness H = {_fmt_set(sr.witness)})" if sr and sr.witness is not None else ""))
    for ann in r.annotations:
        rep.note(f"  {ann}")


def cmd_closure(g: Graph, a, rep: Report):
    X = _ids(a.set)
    levels = hersat.lambda_levels(g, X)
    c = hersat.closure(g, X)
    rep.add("closure", c, parameters={"X": X}, levels=[list(s.ids) for s in levels], depth=g.depth_label)
    rep.note(f"closure of {_fmt_set(X)}: {_fmt_set(c.ids)}")


def cmd_lattice(g: Graph, a, rep: Report):
    L = hersat.enumerate_lattice(g, a.lattice_cap)
    meet, join = L.tables()
    rep.add("enumerate_lattice", L.as_lists(), parameters={"lattice_cap": a.lattice_cap},
            meet=meet, join=join)
    cof = hersat.is_cofinal(g, a.lattice_cap)
    rep.add("is_cofinal", cof.cofinal, witness={"vertex": cof.vertex, "avoided": cof.avoided,
                                                "kind": cof.avoided_kind})
    rep.note(f"{len(L)} hereditary saturated sets")
    for s in L:
        rep.note(f"  {_fmt_set(s.ids)}")
    rep.note(f"cofinal: {cof.cofinal}")


def cmd_quotient(g: Graph, a, rep: Report):
    Q = hersat.quotient_graph(g, _ids(a.set))
    rep.add("quotient_graph", Q, parameters={"H": _ids(a.set)})
    rep.note(serialize(Q, expand=True).rstrip())
    return Q


def cmd_restrict(g: Graph, a, rep: Report):
    R = hersat.restriction_graph(g, _ids(a.set))
    rep.add("restriction_graph", R, parameters={"H": _ids(a.set)})
    rep.note(serialize(R, expand=True).rstrip())
    return R


def cmd_hgraph(g: Graph, a, rep: Report):
    H = _ids(a.set)
    fs = con.f_set(g, H)
    if not fs.finite:
        rep.add("f_set", "infinite", parameters={"H": H}, cycle=list(fs.cycle.ids),
                connector=list(fs.connector.ids))
        rep.note("entry paths into H are infinite: cycle " + ".".join(fs.cycle.ids))
        return None
    G = con.h_graph(g, H)
    rep.add("f_set", [list(p.ids) for p in fs.paths], parameters={"H": H})
    rep.add("h_graph", G)
    rep.note(serialize(G, expand=True).rstrip())
    return G


def cmd_tails(g: Graph, a, rep: Report):
    tails = cls.maximal_tails(g, a.lattice_cap)
    primes = cls.prime_ideal_report(g, a.lattice_cap)
    rep.add("maximal_tails", [list(t.members) for t in tails])
    rep.add("prime_ideal_report", [{"H": list(e.H), "is_prime": e.is_prime} for e in primes.entries],
            caveat=primes.caveat)
    for t in tails:
        rep.note(f"maximal tail {_fmt_set(t.members)}")
    if primes.caveat:
        rep.note(primes.caveat)


def cmd_stable_rank(g: Graph, a, rep: Report):
    depths = [g]
    if g.origin is not None and a.escalate:
        depths += [g.origin.at_depth(g.origin.depth + k) for k in range(1, a.escalate + 1)]
    for G in depths:
        sr = cls.stable_rank(G, a.lattice_cap)
        rep.add("stable_rank", sr.value, sr.basis, parameters={"depth": sr.depth},
                witness=sr.witness, reason=sr.reason)
        label = f" at depth {sr.depth}" if sr.depth is not None else ""
        rep.note(f"stable rank{label}: {sr.value.value}" + (f" ({sr.reason})" if sr.reason else ""))


def cmd_trace(g: Graph, a, rep: Report):
    t = monoid.trace_solve(g)
    rep.add("trace_solve", None if t is None else {v: str(x) for v, x in t.values.items()})
    rep.note("no nonzero graph trace" if t is None
             else "trace: " + ", ".join(f"{v}={x}" for v, x in t.values.items()))


def cmd_monoid_leq(g: Graph, a, rep: Report):
    x, y = monoid.MonoidElement.parse(a.left), monoid.MonoidElement.parse(a.right)
    ans = monoid.monoid_leq(g, x, y, a.bound)
    rep.add("monoid_leq", ans.verdict, parameters={"a": x.as_dict(), "b": y.as_dict(), "bound": a.bound},
            complement=ans.complement, derivation=ans.derivation, reason=ans.reason or None)
    rep.note(f"[{x.format()}] <= [{y.format()}]: {ans.verdict.value}"
             + (f" with complement {ans.complement.format()}" if ans.complement is not None else ""))
    if ans.derivation:
        for s in ans.derivation.steps:
            rep.note(f"  {s.direction} at {s.vertex}: {s.result.format()}")


def cmd_filtration(g: Graph, a, rep: Report):
    N = len(g.vertices) if a.stages is None else a.stages
    f = con.k_filtration(g, N)
    rep.add("k_filtration", [to_document(X, expand=True) for X in f.stages], parameters={"N": N},
            log=list(f.log))
    for n, X in enumerate(f.stages):
        rep.note(f"stage {n}: {len(X.vertices)} vertices, {len(X.edges)} edges")
    return f.stages[-1]


def cmd_completions(g: Graph, a, rep: Report):
    T = (_ids(a.set), [])
    ch = con.completion_chain(g, T)
    rep.add("completion_chain", {"loop": ch.loop, "exit": ch.exit, "sinks": list(ch.sinks),
                                 "quotient": ch.quotient}, parameters={"T": T[0]})
    rep.note(f"loop completion: {_fmt_set(ch.loop.vertices)}")
    rep.note(f"exit completion: {_fmt_set(ch.exit.vertices)}, sinks {_fmt_set(ch.sinks)}")
    rep.note(f"quotient by closed sinks: {_fmt_set(ch.quotient.vertices)}")
    return ch.quotient


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "closure": cmd_closure,
    "lattice": cmd_lattice,
    "quotient": cmd_quotient,
    "restrict": cmd_restrict,
    "hgraph": cmd_hgraph,
    "tails": cmd_tails,
    "stable-rank": cmd_stable_rank,
    "trace": cmd_trace,
    "monoid-leq": cmd_monoid_leq,
    "filtration": cmd_filtration,
    "completions": cmd_completions,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, help="truncation depth for generator documents")
    common.add_argument("--bound", type=int, default=monoid.DEFAULT_BOUND,
                        help="total multiplicity cap for monoid search")
    common.add_argument("--lattice-cap", type=int, default=hersat.DEFAULT_LATTICE_CAP,
                        help="largest vertex count for lattice enumeration")
    common.add_argument("--format", choices=("json", "dot", "text"), default="text")

    p = argparse.ArgumentParser(prog="lpagraph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("file")
        if name in ("closure", "quotient", "restrict", "hgraph", "completions"):
            sp.add_argument("--set", default="", help="comma separated vertex ids")
        if name == "monoid-leq":
            sp.add_argument("left", help='element such as "v:2,w"')
            sp.add_argument("right")
        if name == "filtration":
            sp.add_argument("--stages", type=int)
        if name == "stable-rank":
            sp.add_argument("--escalate", type=int, default=0,
                            help="also decide at this many deeper truncations")
    cp = sub.add_parser("corpus", parents=[common])
    cp.add_argument("--max-vertices", type=int, default=3)
    cp.add_argument("--max-parallel", type=int, default=1)
    cp.add_argument("--seed", type=int, help="seeded stream instead of exhaustive")
    cp.add_argument("--count", type=int, default=100)
    return p


def _corpus(a, out) -> int:
    if a.seed is None:
        stream = exhaustive(a.max_vertices, a.max_parallel)
    else:
        stream = seeded(a.seed, a.count, a.max_vertices, a.max_parallel)
    for g in stream:
        out.write(json.dumps(to_document(g), separators=(",", ":")) + "\n")
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    a = build_parser().parse_args(argv)
    if a.command == "corpus":
        return _corpus(a, out)
    try:
        g = read_graph(a.file, a.depth)
        rep = Report(a.command, input_digest(g), {k: v for k, v in vars(a).items() if k != "command"})
        graph_out = COMMANDS[a.command](g, a, rep)
        if a.format == "dot":
            if graph_out is None:
                print(f"lpagraph {a.command}: no graph output for --format dot", file=sys.stderr)
                return EXIT_INPUT
            out.write(export_dot(graph_out))
        elif a.format == "json":
            out.write(dumps(rep.to_json()))
        else:
            out.write(rep.text())
        return EXIT_OK
    except LpaGraphError as exc:
        if isinstance(exc, InvariantFailure):
            code = EXIT_INVARIANT
        elif isinstance(exc, ResourceCapError):
            code = EXIT_CAP
        else:
            code = EXIT_INPUT
        if a.format == "json":
            out.write(dumps(error_document(a.command, exc, code)))
        print(f"lpagraph {a.command}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())


def main_entry() -> None:
    sys.exit(main())
