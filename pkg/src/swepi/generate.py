"""Initial topologies: regular ring lattices and Watts-Strogatz graphs."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GenerationFailedError, InvalidParamsError
from .graph import Graph, is_connected
from .rng import make_rng

MAX_WS_RETRIES = 100


@dataclass(frozen=True)
class WsParams:
    n: int
    k: int
    p: float
    seed: int

    def __post_init__(self):
        if self.k % 2 != 0 or not 2 <= self.k < self.n:
            raise InvalidParamsError("k must be even with 2 <= k < n")
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParamsError("p must be in [0, 1]")


def ring_lattice(n: int, k: int) -> Graph:
    """Ring of n nodes, each adjacent to its k/2 nearest neighbors per side."""
    if k % 2 != 0 or not 2 <= k < n:
        raise InvalidParamsError("k must be even with 2 <= k < n")
    edges = [
        (i, (i + lane) % n)
        for lane in range(1, k // 2 + 1)
        for i in range(n)
    ]
    return Graph(n, edges)


def watts_strogatz(params: WsParams) -> Graph:
    """Watts-Strogatz rewiring of a ring lattice.

    Scans lanes 1..k/2; each clockwise lattice edge (i, i+lane) is, with
    probability p, detached at its far endpoint and reattached to a uniform
    random target, rejecting self-loops and parallel edges. Disconnected
    samples are regenerated from the next derived seed rather than repaired.
    """
    n, k, p = params.n, params.k, params.p
    for attempt in range(MAX_WS_RETRIES):
        rng = make_rng(params.seed, "ws", attempt)
        adj = [set() for _ in range(n)]
        for lane in range(1, k // 2 + 1):
            for i in range(n):
                j = (i + lane) % n
                adj[i].add(j)
                adj[j].add(i)
        for lane in range(1, k // 2 + 1):
            for i in range(n):
                if rng.random() >= p:
                    continue
                if len(adj[i]) >= n - 1:
                    continue  # no legal target exists
                far = (i + lane) % n
                while True:
                    t = int(rng.integers(n))
                    if t != i and t not in adj[i]:
                        break
                adj[i].discard(far)
                adj[far].discard(i)
                adj[i].add(t)
                adj[t].add(i)
        edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
        g = Graph(n, edges)
        if is_connected(g):
            return g
    raise GenerationFailedError(
        f"no connected sample in {MAX_WS_RETRIES} attempts (n={n}, k={k}, p={p})"
    )
