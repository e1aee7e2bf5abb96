"""Undirected simple graphs and their topological metrics.

The graph is stored as per-node neighbor sets plus a canonical edge list
(u < v, sorted). Instances are treated as immutable once constructed;
all rewiring happens by building a new Graph or through the tuner's
working copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .bfs import bfs_distance_sums
from .errors import (
    DisconnectedGraphError,
    InvalidNodeError,
    InvalidParamsError,
    NotAnEdgeError,
)

class Graph:
    """Simple undirected graph on nodes 0..n-1."""

    __slots__ = ("n", "adj", "edges", "_csr")

    def __init__(self, n: int, edges):
        if n < 1:
            raise InvalidParamsError("node count must be >= 1")
        adj = [set() for _ in range(n)]
        canon = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidParamsError(f"edge ({u},{v}) out of range")
            if u == v:
                raise InvalidParamsError(f"self-loop at node {u}")
            a, b = (u, v) if u < v else (v, u)
            if b in adj[a]:
                raise InvalidParamsError(f"parallel edge ({a},{b})")
            adj[a].add(b)
            adj[b].add(a)
            canon.append((a, b))
        canon.sort()
        self.n = n
        self.adj = adj
        self.edges = canon
        self._csr = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adj], dtype=np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def csr(self) -> csr_matrix:
        """Adjacency matrix in CSR form (cached)."""
        if self._csr is None:
            if self.edges:
                e = np.asarray(self.edges, dtype=np.int32)
                rows = np.concatenate([e[:, 0], e[:, 1]])
                cols = np.concatenate([e[:, 1], e[:, 0]])
            else:
                rows = cols = np.empty(0, dtype=np.int32)
            data = np.ones(len(rows), dtype=np.int8)
            self._csr = csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        return self._csr

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, tuple(self.edges)))

    def __reduce__(self):
        return (Graph, (self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class PathStats:
    apl: float
    diameter: int
    reachable_pairs: int


@dataclass(frozen=True)
class ClusteringStats:
    cc: float
    per_node: np.ndarray


def _check_node(g: Graph, u: int) -> None:
    if not 0 <= u < g.n:
        raise InvalidNodeError(f"node {u} out of range for n={g.n}")


def average_path_length(g: Graph) -> PathStats:
    """Mean shortest-path length over all ordered pairs, by all-sources BFS.

    Raises DisconnectedGraphError if any pair is unreachable; unreachable
    pairs are never silently skipped.
    """
    if g.n == 1:
        return PathStats(apl=0.0, diameter=0, reachable_pairs=0)
    csr = g.csr()
    total, diameter = bfs_distance_sums(csr.indptr, csr.indices, np.arange(g.n), g.n)
    if np.isnan(total):
        raise DisconnectedGraphError("graph has unreachable node pairs")
    pairs = g.n * (g.n - 1)
    return PathStats(apl=total / pairs, diameter=int(diameter), reachable_pairs=pairs)


def sampled_apl(g: Graph, sources: np.ndarray) -> float:
    """APL estimate from BFS out of a fixed source subset.

    Used only for inner-loop annealing on large graphs; final reported
    values always come from average_path_length.
    """
    sources = np.asarray(sources, dtype=np.int64)
    if sources.size == 0:
        raise InvalidParamsError("need at least one source")
    csr = g.csr()
    total, _ = bfs_distance_sums(csr.indptr, csr.indices, sources, g.n)
    if np.isnan(total):
        raise DisconnectedGraphError("graph has unreachable node pairs")
    return float(total / (sources.size * (g.n - 1)))


def triangle_counts(g: Graph) -> np.ndarray:
    """Number of triangles through each node (E_i)."""
    tri = np.zeros(g.n, dtype=np.int64)
    adj = g.adj
    for u, v in g.edges:
        common = adj[u] & adj[v]
        c = len(common)
        if c:
            tri[u] += c
            tri[v] += c
            for w in common:
                tri[w] += 1
    # each triangle is counted once per vertex via 3 edges, i.e. 3x per node
    return tri // 3


def clustering_weights(degrees: np.ndarray) -> np.ndarray:
    """Per-node factor w_i with c_i = w_i * E_i; w_i = 0 for degree <= 1."""
    k = degrees.astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(k >= 2, 2.0 / (k * (k - 1.0)), 0.0)
    return w


def transitivity(g: Graph) -> ClusteringStats:
    """Mean local clustering coefficient, c_i = 2 E_i / (k_i (k_i - 1))."""
    tri = triangle_counts(g)
    per_node = clustering_weights(g.degrees()) * tri
    return ClusteringStats(cc=float(per_node.mean()), per_node=per_node)


def is_connected(g: Graph) -> bool:
    if g.n == 1:
        return True
    ncomp, _ = connected_components(g.csr(), directed=False)
    return ncomp == 1


def common_neighbors(g: Graph, u: int, v: int) -> set:
    _check_node(g, u)
    _check_node(g, v)
    if u == v:
        raise InvalidNodeError("common_neighbors requires u != v")
    return g.adj[u] & g.adj[v]


def edge_in_triangle(g: Graph, u: int, v: int) -> bool:
    if not g.has_edge(u, v):
        raise NotAnEdgeError(f"({u},{v}) is not an edge")
    return bool(g.adj[u] & g.adj[v])


def degree_sequence(g: Graph) -> list:
    return sorted(len(a) for a in g.adj)


def read_edge_list(path) -> Graph:
    """Parse the interchange format: header "N M", then one "u v" per line.

    Lines starting with '#' are ignored.
    """
    lines = []
    for raw in Path(path).read_text().splitlines():
        s = raw.strip()
        if s and not s.startswith("#"):
            lines.append(s)
    if not lines:
        raise InvalidParamsError(f"{path}: empty edge-list file")
    head = lines[0].split()
    if len(head) != 2:
        raise InvalidParamsError(f"{path}: bad header {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise InvalidParamsError(f"{path}: header says {m} edges, found {len(lines) - 1}")
    edges = []
    for s in lines[1:]:
        parts = s.split()
        if len(parts) != 2:
            raise InvalidParamsError(f"{path}: bad edge line {s!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph(n, edges)


def write_edge_list(g: Graph, path) -> None:
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    Path(path).write_text("\n".join(out) + "\n")
