import json
from pathlib import Path

import pytest
from hypothesis import given, settings

from lpagraph import named
from lpagraph.constructions import h_graph
from lpagraph.errors import DocumentError, StructuralError
from lpagraph.hersat import quotient_graph
from lpagraph.io import canonicalize, export_dot, input_digest, parse, serialize

import oracles

DATA = Path(__file__).resolve().parent.parent / "data" / "graphs"


def test_rose2_document():
    g = parse((DATA / "rose2.json").read_text())
    assert g.vertices == ("v",) and len(g.edges) == 2
    assert all(e.source == e.range == "v" for e in g.edges)


@pytest.mark.parametrize("path", sorted(DATA.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_documents_round_trip(path):
    text = path.read_text()
    assert serialize(parse(text)) == text


def test_unknown_field_named():
    doc = {"format_version": 1, "vertices": ["a"], "edges": [], "colour": "red"}
    with pytest.raises(DocumentError, match="colour"):
        parse(json.dumps(doc))
    doc = {"format_version": 1, "vertices": ["a"], "edges": [{"id": "e", "source": "a", "range": "a", "w": 2}]}
    with pytest.raises(DocumentError, match=r"edges\[0\]\.w"):
        parse(doc)


def test_malformed_json_has_line():
    with pytest.raises(DocumentError, match="line 2"):
        parse('{"format_version": 1,\n "vertices": [,]}')


def test_bad_structure():
    doc = {"format_version": 1, "vertices": ["a"], "edges": [{"id": "e", "source": "a", "range": "b"}]}
    with pytest.raises(StructuralError, match="undeclared range"):
        parse(doc)
    with pytest.raises(DocumentError, match="format_version"):
        parse({"format_version": 7, "vertices": []})


def test_generator_document():
    doc = (DATA / "rose_ladder.json").read_text()
    g = parse(doc)
    assert len(g.vertices) == 6 and g.origin.depth == 6
    assert len(parse(doc, depth=3).vertices) == 3
    assert serialize(g) == doc
    assert '"vertices"' in serialize(g, expand=True)


@settings(max_examples=100, deadline=None)
@given(oracles.graphs(max_vertices=5))
def test_round_trip_property(g):
    text = serialize(g)
    h = parse(text)
    assert h == g and serialize(h) == text
    assert canonicalize(json.dumps(json.loads(text))) == text


def test_dot_export():
    dot = export_dot(named("chain3"))
    assert dot.count("->") == 2 and dot.startswith('digraph "E" {')
    dot = export_dot(named("rose2"))
    assert dot.count('"v" -> "v"') == 2
    G = h_graph(named("chain2"), ["v"])
    dot = export_dot(G)
    assert '"path:e1"' in dot and dot.startswith("// ideal graph of {v}")
    dot = export_dot(quotient_graph(named("rose2_sink"), ["w"]))
    assert "// quotient by {w}" in dot


def test_digest_stable():
    assert input_digest(named("rose2")) == input_digest(parse(serialize(named("rose2"))))
    assert input_digest(named("rose2")) != input_digest(named("rose2_sink"))
