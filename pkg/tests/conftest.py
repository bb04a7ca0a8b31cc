import random

import pytest
from hypothesis import settings

from cubhom.graph import Graph, gen_cycle, gen_named

# fixed example streams so reruns see the same cases
settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")


def random_connected_graph(rng: random.Random, max_n: int = 8, p: float = 0.4) -> Graph:
    """Random spanning tree plus independent extra edges."""
    n = rng.randint(2, max_n)
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    return Graph.from_edges(n, edges, name=f"random{n}")


@pytest.fixture(scope="session")
def c5():
    return gen_cycle(5)


@pytest.fixture(scope="session")
def petersen():
    return gen_named("petersen")


@pytest.fixture(scope="session")
def octahedron():
    return gen_named("octahedron")
