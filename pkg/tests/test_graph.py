import pytest
from hypothesis import given, settings

from lpagraph import Graph, named
from lpagraph.errors import StructuralError, UnknownVertexError
from lpagraph.graph import (
    ClosedSimplePath,
    CspCount,
    Path,
    closed_simple_paths,
    condition_K,
    condition_L,
    csp_class,
    cyclic_mask,
    has_exit,
    is_acyclic,
    reaches,
    scc,
    simple_cycles,
    sinks,
    sources,
    tree,
    validate,
)

import oracles


def test_build_with_pairs_assigns_ids():
    g = Graph.build(["a", "b"], [("a", "b"), ("b", "b")])
    assert [e.id for e in g.edges] == ["e0", "e1"]
    assert g.out_edges("b")[0].range == "b"


def test_validate_reports_problems():
    bad = Graph(("a", "a"), ())
    assert not validate(bad)
    assert any("duplicate vertex" in m for m in validate(bad).errors)
    g = Graph.build(["a"], [("x1", "a", "z")])
    res = validate(g)
    assert not res.valid and "undeclared range 'z'" in res.errors[0]
    assert validate(named("empty")).empty


def test_dangling_edge_rejected_when_used():
    g = Graph.build(["a"], [("x1", "a", "z")])
    with pytest.raises(StructuralError):
        g.reach


def test_unknown_vertex():
    with pytest.raises(UnknownVertexError, match="nope"):
        named("chain3").vid("nope")


def test_reachability_and_tree():
    g = named("chain3")
    assert reaches(g, "u", "w") and not reaches(g, "w", "u")
    assert reaches(g, "v", "v")
    assert tree(g, ["v"]) == {"v", "w"}
    assert sinks(g) == {"w"} and sources(g) == {"u"}


def test_vertex_set_algebra():
    g = named("chain3")
    a, b = g.vset(["u", "v"]), g.vset(["v", "w"])
    assert (a & b) == {"v"}
    assert (a | b) == {"u", "v", "w"}
    assert (a - b).ids == ("u",)
    assert a.complement() == {"w"}
    assert not a.hereditary and b.hereditary


def test_paths_must_compose():
    g = named("chain3")
    assert Path.from_ids(g, ["e1", "e2"]).vertex_ids == ("u", "v", "w")
    with pytest.raises(ValueError):
        Path.from_ids(g, ["e2", "e1"])
    with pytest.raises(ValueError):
        ClosedSimplePath.from_ids(g, ["e1"])


@pytest.mark.parametrize(
    "name,vertex,count",
    [
        ("chain3", "u", CspCount.ZERO),
        ("loop1", "w", CspCount.ONE),
        ("rose2", "v", CspCount.TWO_OR_MORE),
        ("rose2_sink", "w", CspCount.ZERO),
        ("loop1_entry", "u", CspCount.ZERO),
    ],
)
def test_csp_class_named(name, vertex, count):
    c = csp_class(named(name), vertex)
    assert c.count is count
    for w in c.witnesses:
        assert w.base == vertex


def test_csp_class_back_and_forth():
    # v <-> w twice over: infinitely many closed simple paths at v via w's loop
    g = Graph.build(["v", "w"], [("p", "v", "w"), ("q", "w", "v"), ("l", "w", "w")])
    c = csp_class(g, "v")
    assert c.count is CspCount.TWO_OR_MORE
    assert {w.ids for w in c.witnesses} == {("p", "q"), ("p", "l", "q")}


@settings(max_examples=150, deadline=None)
@given(oracles.graphs(max_vertices=3))
def test_csp_class_matches_walk_oracle(g):
    for v in g.vertices:
        c = csp_class(g, v)
        assert c.count.value == oracles.csp_count(g, v)
        found = oracles.csps(g, v, 3 * len(g.vertices) + 1)
        for w in c.witnesses:
            assert w.ids in found


def test_closed_simple_paths_shortlex():
    g = named("rose2")
    assert [p.ids for p in closed_simple_paths(g, "v", 5)] == [("a",), ("b",)]
    g = Graph.build(["v", "w"], [("p", "v", "w"), ("q", "w", "v"), ("l", "w", "w")])
    got = [p.ids for p in closed_simple_paths(g, "v", 3)]
    assert got == [("p", "q"), ("p", "l", "q"), ("p", "l", "l", "q")]


def test_conditions_named():
    assert condition_L(named("rose2")) and condition_K(named("rose2"))
    r = condition_L(named("loop1"))
    assert not r and r.witness.ids == ("e",)
    k = condition_K(named("loop1_entry"))
    assert not k and k.witness_vertex == "w"
    # (L) without (K): a loop whose exit never returns
    g = Graph.build(["v", "s"], [("l", "v", "v"), ("x", "v", "s")])
    assert condition_L(g) and not condition_K(g)
    assert condition_K(named("chain3")) and condition_K(named("empty"))


@settings(max_examples=100, deadline=None)
@given(oracles.graphs(max_vertices=4))
def test_condition_L_against_cycle_listing(g):
    expected = True
    for cyc in simple_cycles(g):
        if not has_exit(g, cyc):
            expected = False
    assert bool(condition_L(g)) == expected


def test_scc_topological():
    g = named("rose2_sink")
    info = scc(g)
    assert info.components == (("v",), ("w",))
    assert info.cyclic == (True, False)
    assert info.condensation == ((0, 1),)
    assert is_acyclic(named("chain3")) and not is_acyclic(g)
    assert g.ids_of(cyclic_mask(g)) == ("v",)


@settings(max_examples=150, deadline=None)
@given(oracles.graphs(max_vertices=4))
def test_reach_tree_and_condition_implications(g):
    if condition_K(g):
        assert condition_L(g)
    for v in g.vertices:
        assert set(tree(g, [v])) == oracles.reach_set(g, v)
        for w in g.vertices:
            assert reaches(g, v, w) == (w in tree(g, [v]))
    hereditary = [set(S) for S in oracles.subsets(g.vertices) if oracles.is_hereditary(g, set(S))]
    for X in oracles.subsets(g.vertices):
        T = set(tree(g, X))
        assert oracles.is_hereditary(g, T) and set(X) <= T
        assert all(T <= S for S in hereditary if set(X) <= S)


def test_empty_graph_vacuous():
    g = named("empty")
    assert condition_L(g) and condition_K(g) and is_acyclic(g)
    assert scc(g).components == ()
