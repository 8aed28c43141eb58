"""Graph documents (JSON), DOT export and report documents."""
from __future__ import annotations

import dataclasses
import enum
import hashlib
import json
from fractions import Fraction
from pathlib import Path as FsPath
from typing import Any, Optional, Union

from .errors import DocumentError, LpaGraphError, StructuralError
from .generators import FAMILIES, generate
from .graph import Edge, Graph, VertexSet, validate

FORMAT_VERSION = 1
_TOP_FIELDS = ("format_version", "vertices", "edges", "generator")
_EDGE_FIELDS = ("id", "source", "range")
_GEN_FIELDS = ("family", "parameters", "default_depth")


def _fail(where: str, msg: str):
    raise DocumentError(f"{where}: {msg}")


def _check_fields(obj, allowed, where):
    if not isinstance(obj, dict):
        _fail(where, "expected an object")
    for k in obj:
        if k not in allowed:
            _fail(f"{where}.{k}" if where != "document" else k, f"unknown field {k!r}")


def load_document(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def parse(document: Union[str, dict], depth: Optional[int] = None) -> Graph:
    """Build a Graph from a document (JSON text or an already-decoded object).

    A document with a ``generator`` descriptor is truncated at ``depth``, or at
    its ``default_depth`` when no depth is given.
    """
    doc = load_document(document) if isinstance(document, str) else document
    _check_fields(doc, _TOP_FIELDS, "document")
    if doc.get("format_version") != FORMAT_VERSION:
        _fail("format_version", f"expected {FORMAT_VERSION}, got {doc.get('format_version')!r}")
    gen = doc.get("generator")
    if gen is not None:
        _check_fields(gen, _GEN_FIELDS, "generator")
        family = gen.get("family")
        if family not in FAMILIES:
            _fail("generator.family", f"unknown family {family!r}")
        params = gen.get("parameters", {})
        if not isinstance(params, dict):
            _fail("generator.parameters", "expected an object")
        d = gen.get("default_depth") if depth is None else depth
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            _fail("generator.default_depth", f"expected a non-negative integer, got {d!r}")
        if "vertices" in doc or "edges" in doc:
            _fail("document", "a generator document must not list vertices or edges")
        return generate(family, d, **params)

    vertices = doc.get("vertices")
    if not isinstance(vertices, list):
        _fail("vertices", "expected a list of vertex ids")
    for i, v in enumerate(vertices):
        if not isinstance(v, str):
            _fail(f"vertices[{i}]", f"vertex id must be a string, got {v!r}")
    raw_edges = doc.get("edges", [])
    if not isinstance(raw_edges, list):
        _fail("edges", "expected a list")
    edges = []
    for i, e in enumerate(raw_edges):
        where = f"edges[{i}]"
        _check_fields(e, _EDGE_FIELDS, where)
        for k in _EDGE_FIELDS:
            if not isinstance(e.get(k), str):
                _fail(f"{where}.{k}", "missing or not a string")
        edges.append(Edge(e["id"], e["source"], e["range"]))
    g = Graph(tuple(vertices), tuple(edges))
    check = validate(g)
    if not check.valid:
        raise StructuralError(check.errors)
    return g


def read_graph(path: Union[str, FsPath], depth: Optional[int] = None) -> Graph:
    p = FsPath(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DocumentError(f"{p}: {exc.strerror}") from None
    try:
        return parse(text, depth)
    except DocumentError as exc:
        raise DocumentError(f"{p}: {exc}") from None


def to_document(g: Graph, expand: bool = False) -> dict:
    if g.origin is not None and not expand:
        return {
            "format_version": FORMAT_VERSION,
            "generator": {
                "family": g.origin.family,
                "parameters": dict(g.origin.params),
                "default_depth": g.origin.depth,
            },
        }
    return {
        "format_version": FORMAT_VERSION,
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "source": e.source, "range": e.range} for e in g.edges],
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def serialize(g: Graph, expand: bool = False) -> str:
    """Canonical text: fixed key order, two-space indent, trailing newline."""
    return dumps(to_document(g, expand))


def canonicalize(text: str) -> str:
    return serialize(parse(text))


# ----- DOT -----------------------------------------------------------------------------------


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: Graph, name: str = "E") -> str:
    lines = []
    for note in g.provenance:
        lines.append(f"// {note}")
    if g.origin is not None:
        lines.append(f"// generator {g.origin.family}, depth {g.origin.depth}")
    lines.append(f"digraph {_q(name)} {{")
    for v in g.vertices:
        lines.append(f"  {_q(v)};")
    for e in g.edges:
        lines.append(f"  {_q(e.source)} -> {_q(e.range)} [label={_q(e.id)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ----- report documents ----------------------------------------------------------------------


def to_jsonable(obj: Any) -> Any:
    """Plain JSON values for the result types used in reports."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, VertexSet):
        return list(obj.ids)
    if isinstance(obj, Graph):
        return to_document(obj, expand=True)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if hasattr(obj, "as_dict") and hasattr(obj, "support"):
        return obj.as_dict()
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [to_jsonable(x) for x in obj]
    return obj


def input_digest(g: Graph) -> str:
    return "sha256:" + hashlib.sha256(serialize(g, expand=True).encode()).hexdigest()


@dataclasses.dataclass
class Report:
    command: str
    digest: str
    parameters: dict
    results: list = dataclasses.field(default_factory=list)
    summary: list = dataclasses.field(default_factory=list)

    def add(self, operation: str, verdict: Any, basis: str = "", parameters: Optional[dict] = None,
            **extra) -> None:
        entry = {"operation": operation, "parameters": parameters or {}, "verdict": to_jsonable(verdict)}
        if basis:
            entry["basis"] = basis
        for k, v in extra.items():
            entry[k] = to_jsonable(v)
        self.results.append(entry)

    def note(self, line: str) -> None:
        self.summary.append(line)

    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "command": self.command,
            "input_digest": self.digest,
            "parameters": to_jsonable(self.parameters),
            "results": self.results,
        }

    def text(self) -> str:
        return "\n".join(self.summary) + ("\n" if self.summary else "")


def error_document(command: str, exc: LpaGraphError, code: int) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "command": command,
        "error": {"kind": type(exc).__name__, "message": str(exc), "exit_code": code},
    }
