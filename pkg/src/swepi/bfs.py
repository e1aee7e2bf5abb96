"""Unweighted shortest-path aggregation kernels.

The anneal loop evaluates the average path length thousands of times, so
the all-sources BFS is compiled with numba when available. The scipy
dijkstra fallback computes identical values (hop distances are exact
integers either way).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a soft dependency
    _HAVE_NUMBA = False


def _bfs_sums_py(indptr, indices, sources, n):
    total = 0.0
    dmax = 0
    for s in sources:
        dist = np.full(n, -1, dtype=np.int32)
        dist[s] = 0
        frontier = [s]
        reached = 1
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for k in range(indptr[u], indptr[u + 1]):
                    v = indices[k]
                    if dist[v] < 0:
                        dist[v] = d
                        total += d
                        nxt.append(v)
                        reached += 1
            frontier = nxt
        if reached < n:
            return np.nan, -1
        if d - 1 > dmax:
            dmax = d - 1
    return total, dmax


if _HAVE_NUMBA:

    @njit(cache=True)
    def _bfs_sums_nb(indptr, indices, sources, n):  # pragma: no cover - compiled
        total = 0.0
        dmax = 0
        dist = np.empty(n, dtype=np.int32)
        queue = np.empty(n, dtype=np.int32)
        for si in range(len(sources)):
            s = sources[si]
            dist[:] = -1
            dist[s] = 0
            queue[0] = s
            head = 0
            tail = 1
            while head < tail:
                u = queue[head]
                head += 1
                du = dist[u]
                for k in range(indptr[u], indptr[u + 1]):
                    v = indices[k]
                    if dist[v] < 0:
                        dist[v] = du + 1
                        total += du + 1
                        queue[tail] = v
                        tail += 1
            if tail < n:
                return np.nan, -1
            dm = dist[queue[n - 1]]
            if dm > dmax:
                dmax = dm
        return total, dmax


def _bfs_dists_py(indptr, indices, source, n):
    dist = np.full(n, -1, dtype=np.int32)
    dist[source] = 0
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if dist[v] < 0:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return dist


if _HAVE_NUMBA:

    @njit(cache=True)
    def _bfs_dists_nb(indptr, indices, source, n):  # pragma: no cover - compiled
        dist = np.full(n, -1, dtype=np.int32)
        queue = np.empty(n, dtype=np.int32)
        dist[source] = 0
        queue[0] = source
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if dist[v] < 0:
                    dist[v] = du + 1
                    queue[tail] = v
                    tail += 1
        return dist


def _bfs_sums_pad_py(nbr, cnt, sources, n):
    total = 0.0
    dmax = 0
    for s in sources:
        dist = np.full(n, -1, dtype=np.int32)
        dist[s] = 0
        frontier = [s]
        reached = 1
        d = 0
        while frontier:
            d += 1
            nxt = []
            for u in frontier:
                for k in range(cnt[u]):
                    v = nbr[u, k]
                    if dist[v] < 0:
                        dist[v] = d
                        total += d
                        nxt.append(v)
                        reached += 1
            frontier = nxt
        if reached < n:
            return np.nan, -1
        if d - 1 > dmax:
            dmax = d - 1
    return total, dmax


def _bfs_dists_pad_py(nbr, cnt, source, n):
    dist = np.full(n, -1, dtype=np.int32)
    dist[source] = 0
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for k in range(cnt[u]):
                v = nbr[u, k]
                if dist[v] < 0:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return dist


if _HAVE_NUMBA:

    @njit(cache=True)
    def _bfs_sums_pad_nb(nbr, cnt, sources, n):  # pragma: no cover - compiled
        total = 0.0
        dmax = 0
        dist = np.empty(n, dtype=np.int32)
        queue = np.empty(n, dtype=np.int32)
        for si in range(len(sources)):
            s = sources[si]
            dist[:] = -1
            dist[s] = 0
            queue[0] = s
            head = 0
            tail = 1
            while head < tail:
                u = queue[head]
                head += 1
                du = dist[u]
                for k in range(cnt[u]):
                    v = nbr[u, k]
                    if dist[v] < 0:
                        dist[v] = du + 1
                        total += du + 1
                        queue[tail] = v
                        tail += 1
            if tail < n:
                return np.nan, -1
            dm = dist[queue[n - 1]]
            if dm > dmax:
                dmax = dm
        return total, dmax

    @njit(cache=True)
    def _bfs_dists_pad_nb(nbr, cnt, source, n):  # pragma: no cover - compiled
        dist = np.full(n, -1, dtype=np.int32)
        queue = np.empty(n, dtype=np.int32)
        dist[source] = 0
        queue[0] = source
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            for k in range(cnt[u]):
                v = nbr[u, k]
                if dist[v] < 0:
                    dist[v] = du + 1
                    queue[tail] = v
                    tail += 1
        return dist


def bfs_distance_sums_padded(nbr, cnt, sources, n):
    """Like bfs_distance_sums, over a padded (n, maxdeg) neighbor table."""
    sources = np.ascontiguousarray(sources, dtype=np.int32)
    if _HAVE_NUMBA:
        return _bfs_sums_pad_nb(nbr, cnt, sources, n)
    return _bfs_sums_pad_py(nbr, cnt, sources, n)


def bfs_distances_padded(nbr, cnt, source, n):
    """Like bfs_distances, over a padded (n, maxdeg) neighbor table."""
    if _HAVE_NUMBA:
        return _bfs_dists_pad_nb(nbr, cnt, source, n)
    return _bfs_dists_pad_py(nbr, cnt, source, n)


def bfs_distances(indptr, indices, source, n):
    """BFS hop distances from one source; unreachable nodes get -1."""
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int32)
    if _HAVE_NUMBA:
        return _bfs_dists_nb(indptr, indices, source, n)
    return _bfs_dists_py(indptr, indices, source, n)


def bfs_distance_sums(indptr, indices, sources, n):
    """Sum and max of BFS hop distances from each source to all nodes.

    Returns (total, max_distance); total is NaN when some node is
    unreachable from a source.
    """
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int32)
    sources = np.ascontiguousarray(sources, dtype=np.int32)
    if _HAVE_NUMBA:
        return _bfs_sums_nb(indptr, indices, sources, n)
    return _bfs_sums_py(indptr, indices, sources, n)
