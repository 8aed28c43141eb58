"""Small named graphs used throughout the docs and tests."""
from .graph import Graph

NAMED = {
    # u -> v -> w
    "chain3": Graph.build(["u", "v", "w"], [("e1", "u", "v"), ("e2", "v", "w")]),
    "chain2": Graph.build(["u", "v"], [("e1", "u", "v")]),
    "loop1": Graph.build(["w"], [("e", "w", "w")]),
    "rose2": Graph.build(["v"], [("a", "v", "v"), ("b", "v", "v")]),
    "rose2_sink": Graph.build(["v", "w"], [("a", "v", "v"), ("b", "v", "v"), ("f", "v", "w")]),
    "two_rose2": Graph.build(
        ["v", "x"], [("a", "v", "v"), ("b", "v", "v"), ("c", "x", "x"), ("d", "x", "x")]
    ),
    # loop at w with an entry edge u -> w
    "loop1_entry": Graph.build(["u", "w"], [("f", "u", "w"), ("e", "w", "w")]),
    "sink": Graph.build(["s"]),
    "empty": Graph(),
}


def named(name: str) -> Graph:
    return NAMED[name]
