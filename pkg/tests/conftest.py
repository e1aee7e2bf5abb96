"""Shared oracles and graph builders for the test suite.

The oracles are deliberately independent of the library internals:
Floyd-Warshall for path lengths and exhaustive triple enumeration for
clustering, both written against the raw edge list.
"""

import itertools

import numpy as np
import pytest

from swepi import Graph


def floyd_warshall_apl(g: Graph) -> float:
    """O(n^3) dense all-pairs oracle; returns mean over ordered pairs."""
    n = g.n
    inf = float("inf")
    d = np.full((n, n), inf)
    np.fill_diagonal(d, 0.0)
    for u, v in g.edges:
        d[u, v] = d[v, u] = 1.0
    for k in range(n):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    assert np.isfinite(d).all(), "oracle called on a disconnected graph"
    return float(d.sum() / (n * (n - 1)))


def enumeration_cc(g: Graph) -> float:
    """Exhaustive per-node triangle count over all neighbor pairs."""
    total = 0.0
    for i in range(g.n):
        k = g.degree(i)
        if k < 2:
            continue
        tri = sum(
            1
            for a, b in itertools.combinations(sorted(g.adj[i]), 2)
            if g.has_edge(a, b)
        )
        total += 2.0 * tri / (k * (k - 1))
    return total / g.n


def component_count(g: Graph) -> int:
    seen = set()
    comps = 0
    for start in range(g.n):
        if start in seen:
            continue
        comps += 1
        stack = [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            for v in g.adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return comps


def random_connected_graph(rng: np.random.Generator, max_n: int = 50) -> Graph:
    """Random-tree backbone plus random extra edges: connected by construction."""
    n = int(rng.integers(2, max_n + 1))
    edges = set()
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges.add((u, v))
    extra = int(rng.integers(0, max(1, n * 2)))
    for _ in range(extra):
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return Graph(n, sorted(edges))


def complete_graph(n: int) -> Graph:
    return Graph(n, list(itertools.combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
