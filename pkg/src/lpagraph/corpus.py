"""Small multigraphs for property tests: exhaustive and seeded streams."""
from __future__ import annotations

import itertools
import random
from typing import Iterator

from .graph import Edge, Graph


def from_multiplicities(n: int, mult) -> Graph:
    """``mult[s * n + r]`` parallel edges from ``v{s}`` to ``v{r}``."""
    vs = tuple(f"v{i}" for i in range(n))
    edges = []
    for s in range(n):
        for r in range(n):
            for k in range(mult[s * n + r]):
                edges.append(Edge(f"e{s}_{r}_{k}", vs[s], vs[r]))
    return Graph(vs, tuple(edges))


def exhaustive_count(max_vertices: int, max_parallel: int) -> int:
    return sum((max_parallel + 1) ** (n * n) for n in range(1, max_vertices + 1))


def exhaustive(max_vertices: int, max_parallel: int) -> Iterator[Graph]:
    """Every labelled multigraph on ``1..max_vertices`` vertices with at most
    ``max_parallel`` parallel edges per ordered pair (loops included)."""
    if max_vertices <= 0:
        return
    for n in range(1, max_vertices + 1):
        for mult in itertools.product(range(max_parallel + 1), repeat=n * n):
            yield from_multiplicities(n, mult)


def seeded(seed: int, count: int, max_vertices: int, max_parallel: int = 2) -> Iterator[Graph]:
    """A reproducible stream of ``count`` random multigraphs."""
    if max_vertices <= 0 or count <= 0:
        return
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_vertices)
        density = rng.uniform(0.1, 0.5)
        mult = [
            rng.randint(1, max_parallel) if max_parallel and rng.random() < density else 0
            for _ in range(n * n)
        ]
        yield from_multiplicities(n, mult)


def standard_corpus(seeded_count: int = 500) -> Iterator[Graph]:
    """The property-test corpus: all graphs up to 3 vertices with at most 2
    parallel edges, followed by seeded graphs with up to 6 vertices."""
    yield from exhaustive(3, 2)
    yield from seeded(20240601, seeded_count, 6, 2)
