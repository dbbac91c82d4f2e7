"""Shared graph builders and deterministic corpora for the test suite."""

import itertools
import random

import pytest

from nbcensus.graphs import Graph


def er_graph(n: int, p: float, seed: int) -> Graph:
    """Seeded Erdos-Renyi draw; deterministic across runs and platforms."""
    rng = random.Random(seed)
    edges = [e for e in itertools.combinations(range(n), 2)
             if rng.random() < p]
    return Graph(n, edges)


def complete_graph(n: int) -> Graph:
    return Graph(n, list(itertools.combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def wheel_graph(rim: int) -> Graph:
    spokes = [(i, rim) for i in range(rim)]
    return Graph(rim + 1, [(i, (i + 1) % rim) for i in range(rim)] + spokes)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


@pytest.fixture(scope="session")
def k4() -> Graph:
    return complete_graph(4)


@pytest.fixture(scope="session")
def petersen() -> Graph:
    return petersen_graph()


@pytest.fixture(scope="session")
def mixed_corpus() -> list[Graph]:
    """Fixed assortment: named graphs plus a seeded random spread."""
    graphs = [
        complete_graph(4),
        complete_graph(5),
        cycle_graph(9),
        wheel_graph(6),
        petersen_graph(),
    ]
    for seed, (n, p) in enumerate(
            [(6, 0.5), (7, 0.4), (8, 0.35), (9, 0.3), (10, 0.5)],
            start=411):
        graphs.append(er_graph(n, p, seed))
    return graphs
