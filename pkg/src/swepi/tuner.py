"""Degree-preserving rewiring moves and Metropolis-annealed metric tuning.

Three move kinds, all double edge swaps so the degree sequence is
structurally invariant:

* AplSwap      - reconnects two triangle-free edges between four nodes with
                 no shared neighborhoods; provably leaves every node's
                 triangle count (and hence the clustering coefficient)
                 unchanged while altering path lengths.
* CcDecrease   - takes a triangle edge at each of two far-apart nodes and
                 crosses them, destroying local triangles.
* CcIncrease   - collapses a chordless 6-cycle into two triangles.

An annealing loop proposes moves, rejects any that disconnect the graph,
and otherwise Metropolis-accepts on the change of |metric - target|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .bfs import (
    bfs_distance_sums_padded,
    bfs_distances,
    bfs_distances_padded,
)
from .errors import (
    DisconnectedGraphError,
    InvalidParamsError,
    InvalidTemperatureError,
    StaleMoveError,
    TargetsInfeasibleError,
)
from .graph import (
    Graph,
    average_path_length,
    clustering_weights,
    is_connected,
    transitivity,
    triangle_counts,
)

DEFAULT_TOL_CC = 0.005
DEFAULT_TOL_APL = 0.05


class MoveKind(Enum):
    APL_SWAP = "apl_swap"
    CC_DECREASE = "cc_decrease"
    CC_INCREASE = "cc_increase"


class Metric(Enum):
    APL = "apl"
    CC = "cc"


def _e(u: int, v: int) -> tuple:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class RewireMove:
    removed: tuple  # two normalized node pairs
    added: tuple    # two normalized node pairs
    kind: MoveKind

    def inverse(self) -> "RewireMove":
        return RewireMove(removed=self.added, added=self.removed, kind=self.kind)

    def endpoints_balanced(self) -> bool:
        """Degree preservation: both pair sets touch the same node multiset."""
        rem = sorted(x for pair in self.removed for x in pair)
        add = sorted(x for pair in self.added for x in pair)
        return rem == add


@dataclass(frozen=True)
class Objective:
    metric: Metric
    target: float

    def __post_init__(self):
        if self.metric is Metric.APL and self.target <= 0:
            raise InvalidParamsError("APL target must be > 0")
        if self.metric is Metric.CC and not 0.0 <= self.target <= 1.0:
            raise InvalidParamsError("CC target must be in [0, 1]")


@dataclass
class AnnealSchedule:
    t0: float | None = None            # None: 10x the initial objective value
    cooling: float = 0.95
    epoch_len: int = 50                # accepted moves per temperature epoch
    max_iters: int = 200_000
    tol: float | None = None           # None: per-metric default
    max_propose_attempts: int | None = None  # None: 10n
    stall_limit: int = 20_000          # consecutive rejections before giving up
    apl_sample_sources: int = 64
    apl_sample_threshold: int = 600    # use sampled APL when n >= this
    local_cc_moves: bool = False       # pair CC-decrease nodes at hop distance 3

    def __post_init__(self):
        if self.t0 is not None and self.t0 <= 0:
            raise InvalidParamsError("t0 must be > 0")
        if not 0.0 < self.cooling < 1.0:
            raise InvalidParamsError("cooling must be in (0, 1)")
        if self.tol is not None and self.tol <= 0:
            raise InvalidParamsError("tol must be > 0")

    def resolved_tol(self, metric: Metric) -> float:
        if self.tol is not None:
            return self.tol
        return DEFAULT_TOL_APL if metric is Metric.APL else DEFAULT_TOL_CC


@dataclass
class TuneResult:
    graph: Graph
    achieved: float
    converged: bool
    status: str                      # "converged" | "no_progress"
    accepted: int = 0
    rejected_by_reason: dict = field(default_factory=dict)
    objective_trace: list = field(default_factory=list)  # (iter, metric, temperature)
    achieved_apl: float | None = None
    achieved_cc: float | None = None


def _rand_elem(s: set, rng: np.random.Generator):
    seq = tuple(s)
    return seq[int(rng.integers(len(seq)))]


def propose_apl_move(g, rng: np.random.Generator, max_attempts: int | None = None):
    """Path-length move: remove (i,i1),(j,j1), add (i,j),(i1,j1).

    Screening keeps the move triangle-neutral: i,j share no neighbors, the
    removed edges sit in no triangle, and i1,j1 share no neighbors either.
    Returns None when no candidate is found within the attempt budget.
    """
    adj, n = g.adj, g.n
    cap = max_attempts if max_attempts is not None else 10 * n
    for _ in range(cap):
        i = int(rng.integers(n))
        j = int(rng.integers(n))
        if i == j or j in adj[i] or not adj[i] or not adj[j]:
            continue
        if adj[i] & adj[j]:
            continue
        i1 = _rand_elem(adj[i], rng)
        if adj[i] & adj[i1]:
            continue  # edge (i,i1) lies in a triangle
        j1 = _rand_elem(adj[j], rng)
        if j1 == i1:
            continue
        if adj[j] & adj[j1]:
            continue
        if j1 in adj[i1] or adj[i1] & adj[j1]:
            continue
        # distinctness of {i, j, i1, j1} follows: shared nodes would be
        # common neighbors or existing edges, both excluded above
        return RewireMove(
            removed=(_e(i, i1), _e(j, j1)),
            added=(_e(i, j), _e(i1, j1)),
            kind=MoveKind.APL_SWAP,
        )
    return None


def _dists_from(g, source: int) -> np.ndarray:
    if hasattr(g, "nbr"):
        return bfs_distances_padded(g.nbr, g.cnt, source, g.n)
    csr = g.csr()
    return bfs_distances(
        csr.indptr.astype(np.int64), csr.indices.astype(np.int32), source, g.n
    )


def _propose_apl_shortcut(g, rng: np.random.Generator, max_attempts: int | None = None):
    """Directed AplSwap that shortens paths: pick i, BFS to the far fringe,
    and rewire so both added edges bridge distant regions. Preconditions are
    the same as for the uniform proposer; distance >= 3 already rules out
    the common-neighbor cases for (i, j).
    """
    adj, n = g.adj, g.n
    for _ in range(8):
        i = int(rng.integers(n))
        if not adj[i]:
            continue
        dist = _dists_from(g, i)
        dmax = int(dist.max())
        if dmax < 4:
            return None
        far = np.flatnonzero(dist >= max(4, dmax - 2))
        for _ in range(24):
            j = int(far[int(rng.integers(len(far)))])
            i1 = _rand_elem(adj[i], rng)
            if adj[i] & adj[i1]:
                continue
            j1 = _rand_elem(adj[j], rng)
            if j1 == i1 or i1 == j or j1 == i:
                continue
            if adj[j] & adj[j1]:
                continue
            if j1 in adj[i1] or adj[i1] & adj[j1]:
                continue
            return RewireMove(
                removed=(_e(i, i1), _e(j, j1)),
                added=(_e(i, j), _e(i1, j1)),
                kind=MoveKind.APL_SWAP,
            )
    return None


def _ball3(adj, u):
    """Nodes at hop distance exactly 1, 2 and 3 from u."""
    d1 = set(adj[u])
    d2 = set()
    for x in d1:
        d2 |= adj[x]
    d2 -= d1
    d2.discard(u)
    d3 = set()
    for x in d2:
        d3 |= adj[x]
    d3 -= d2
    d3 -= d1
    d3.discard(u)
    return d1, d2, d3


def _is_shortcut(adj, u, v, depth: int = 3):
    """True when d(u, v) > depth once the edge (u, v) is removed."""
    if adj[u] & adj[v]:
        return False
    seen = set(adj[u])
    seen.discard(v)
    frontier = seen | {u}
    seen.add(u)
    for _ in range(depth - 1):
        nxt = set()
        for x in frontier:
            for y in adj[x]:
                if y == v:
                    if x != u:
                        return False
                    continue
                if y not in seen:
                    seen.add(y)
                    nxt.add(y)
        frontier = nxt
    return v not in seen


def _propose_apl_unshortcut(g, rng: np.random.Generator, max_attempts: int | None = None):
    """Directed AplSwap that lengthens paths: trade two nearby long-range
    edges (a,b) and (c,d) for the short-range edges (a,c) and (b,d), with c
    and d at hop distance exactly 3 from a and b respectively (which makes
    the added edges absent and common-neighbor free by construction).
    """
    adj, n = g.adj, g.n
    for _ in range(24):
        a = int(rng.integers(n))
        if not adj[a]:
            continue
        b = _rand_elem(adj[a], rng)
        if not _is_shortcut(adj, a, b, depth=4):
            continue
        _, _, near_a = _ball3(adj, a)
        _, _, near_b = _ball3(adj, b)
        if not near_a or not near_b:
            continue
        cands = list(near_a)
        rng.shuffle(cands)
        for c in cands[:32]:
            if c == b or b in adj[c]:
                continue
            for d in adj[c] & near_b:
                if d == a or d == b or a in adj[d]:
                    continue
                if not _is_shortcut(adj, c, d, depth=4):
                    continue
                return RewireMove(
                    removed=(_e(a, b), _e(c, d)),
                    added=(_e(a, c), _e(b, d)),
                    kind=MoveKind.APL_SWAP,
                )
    return None


def propose_cc_decrease_move(g, rng: np.random.Generator, max_attempts: int | None = None):
    """Triangle-destroying move: cross one triangle edge at i with one at j."""
    adj, n = g.adj, g.n
    cap = max_attempts if max_attempts is not None else 10 * n
    for _ in range(cap):
        i = int(rng.integers(n))
        j = int(rng.integers(n))
        if i == j or not adj[i] or not adj[j]:
            continue
        if adj[i] & adj[j]:
            continue
        i1 = _rand_elem(adj[i], rng)
        ci = adj[i] & adj[i1]
        if not ci:
            continue  # no triangle through (i, i1); implies c_i may still be > 0 elsewhere
        i2 = _rand_elem(ci, rng)
        j1 = _rand_elem(adj[j], rng)
        cj = adj[j] & adj[j1]
        if not cj:
            continue
        j2 = _rand_elem(cj, rng)
        if len({i, j, i1, i2, j1, j2}) != 6:
            continue
        if j1 in adj[i1] or j2 in adj[i2]:
            continue  # an added edge already exists
        return RewireMove(
            removed=(_e(i1, i2), _e(j1, j2)),
            added=(_e(i1, j1), _e(i2, j2)),
            kind=MoveKind.CC_DECREASE,
        )
    return None


def _propose_cc_decrease_local(g, rng: np.random.Generator, max_attempts: int | None = None):
    """CC-decrease variant that pairs nodes at hop distance exactly 3.

    The added cross edges then span at most five hops, so the move leaves
    path lengths nearly untouched — the right choice when the average path
    length must be preserved or raised while clustering comes down.
    Preconditions are identical to the uniform proposer (distance 3 already
    gives common_neighbors(i, j) = empty).
    """
    adj, n = g.adj, g.n
    tri = getattr(g, "tri", None)

    def has_triangle(u):
        if tri is not None:
            return tri[u] > 0
        return any(adj[u] & adj[x] for x in adj[u])

    for _ in range(120):
        i = int(rng.integers(n))
        if not adj[i] or not has_triangle(i):
            continue
        _, _, ball = _ball3(adj, i)
        js = [x for x in ball if has_triangle(x)]
        if not js:
            continue
        j = js[int(rng.integers(len(js)))]
        i1 = _rand_elem(adj[i], rng)
        ci = adj[i] & adj[i1]
        if not ci:
            continue
        i2 = _rand_elem(ci, rng)
        j1 = _rand_elem(adj[j], rng)
        cj = adj[j] & adj[j1]
        if not cj:
            continue
        j2 = _rand_elem(cj, rng)
        if len({i, j, i1, i2, j1, j2}) != 6:
            continue
        if j1 in adj[i1] or j2 in adj[i2]:
            continue
        return RewireMove(
            removed=(_e(i1, i2), _e(j1, j2)),
            added=(_e(i1, j1), _e(i2, j2)),
            kind=MoveKind.CC_DECREASE,
        )
    return None


_SIX_CYCLE_CHORDS = (
    (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (3, 5),
)


def propose_cc_increase_move(g, rng: np.random.Generator, max_attempts: int | None = None):
    """Triangle-creating move on a chordless 6-cycle (i, i1, j1, j, j2, i2).

    Picks i with two non-adjacent neighbors i1, i2, then enumerates
    neighbors j1 of i1 and j2 of i2 that share a neighbor j, rejecting any
    cycle with a chord; chordlessness guarantees the added edges (i1,i2)
    and (j1,j2) are absent. Creates triangles (i,i1,i2) and (j,j1,j2).
    """
    adj, n = g.adj, g.n
    cap = max_attempts if max_attempts is not None else 10 * n
    for _ in range(cap):
        i = int(rng.integers(n))
        if len(adj[i]) < 2:
            continue
        i1 = _rand_elem(adj[i], rng)
        i2 = _rand_elem(adj[i], rng)
        if i1 == i2 or i2 in adj[i1]:
            continue
        cand_j1 = [
            x
            for x in adj[i1]
            if x != i and x != i2 and x not in adj[i] and x not in adj[i2]
        ]
        rng.shuffle(cand_j1)
        for j1 in cand_j1[:4]:
            for j2 in adj[i2]:
                if j2 in (i, j1) or j2 in adj[i] or j2 in adj[i1] or j2 in adj[j1]:
                    continue
                for j in adj[j1] & adj[j2]:
                    if j in (i1, i2) or j in adj[i] or j in adj[i1] or j in adj[i2]:
                        continue
                    return RewireMove(
                        removed=(_e(i1, j1), _e(i2, j2)),
                        added=(_e(i1, i2), _e(j1, j2)),
                        kind=MoveKind.CC_INCREASE,
                    )
    return None


def metropolis_accept(delta: float, temperature: float, rng: np.random.Generator) -> bool:
    """Accept downhill always; uphill with probability exp(-delta/T)."""
    if temperature <= 0:
        raise InvalidTemperatureError("temperature must be > 0")
    if delta <= 0:
        return True
    return float(rng.random()) < math.exp(-delta / temperature)


def apply_move(g: Graph, m: RewireMove) -> Graph:
    """Pure application of a rewire move, validating it first."""
    if not m.endpoints_balanced():
        raise StaleMoveError("move does not preserve degrees")
    for u, v in m.removed:
        if not g.has_edge(u, v):
            raise StaleMoveError(f"removed edge ({u},{v}) not present")
    for u, v in m.added:
        if u == v:
            raise StaleMoveError("added edge is a self-loop")
        if g.has_edge(u, v):
            raise StaleMoveError(f"added edge ({u},{v}) already present")
    if m.added[0] == m.added[1]:
        raise StaleMoveError("added edges coincide")
    edge_set = set(g.edges)
    edge_set.difference_update(m.removed)
    edge_set.update(m.added)
    return Graph(g.n, sorted(edge_set))


class _Working:
    """Mutable rewiring state: adjacency sets plus incremental CC bookkeeping.

    Triangle counts are updated from the common neighborhoods of each touched
    edge, so the clustering coefficient is available in O(degree) per move.
    """

    def __init__(self, g: Graph):
        self.n = g.n
        self.adj = [set(a) for a in g.adj]
        self.deg = g.degrees()
        self.w = clustering_weights(self.deg)
        self.tri = triangle_counts(g).astype(np.float64)
        self.cc = float((self.w * self.tri).sum() / self.n)
        # Padded neighbor table mirrors adj for the BFS kernels; rewiring
        # moves preserve degrees, so the original max degree bounds each row.
        maxdeg = int(self.deg.max()) if self.n else 0
        self.nbr = np.full((self.n, maxdeg), -1, dtype=np.int32)
        self.cnt = self.deg.astype(np.int32).copy()
        for u, nbrs in enumerate(self.adj):
            self.nbr[u, : len(nbrs)] = sorted(nbrs)

    def _remove(self, u: int, v: int) -> None:
        common = self.adj[u] & self.adj[v]
        c = len(common)
        if c:
            self.tri[u] -= c
            self.tri[v] -= c
            dcc = c * (self.w[u] + self.w[v])
            for x in common:
                self.tri[x] -= 1
                dcc += self.w[x]
            self.cc -= dcc / self.n
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self._tbl_remove(u, v)
        self._tbl_remove(v, u)

    def _tbl_remove(self, u: int, v: int) -> None:
        c = self.cnt[u]
        row = self.nbr[u]
        for k in range(c):
            if row[k] == v:
                row[k] = row[c - 1]
                self.cnt[u] = c - 1
                return

    def _tbl_add(self, u: int, v: int) -> None:
        self.nbr[u, self.cnt[u]] = v
        self.cnt[u] += 1

    def _add(self, u: int, v: int) -> None:
        common = self.adj[u] & self.adj[v]
        c = len(common)
        if c:
            self.tri[u] += c
            self.tri[v] += c
            dcc = c * (self.w[u] + self.w[v])
            for x in common:
                self.tri[x] += 1
                dcc += self.w[x]
            self.cc += dcc / self.n
        self.adj[u].add(v)
        self.adj[v].add(u)
        self._tbl_add(u, v)
        self._tbl_add(v, u)

    def apply(self, m: RewireMove) -> None:
        for u, v in m.removed:
            self._remove(u, v)
        for u, v in m.added:
            self._add(u, v)

    def revert(self, m: RewireMove) -> None:
        for u, v in m.added:
            self._remove(u, v)
        for u, v in m.removed:
            self._add(u, v)

    def connected_after(self, m: RewireMove) -> bool:
        """Connectivity needs checking only across the removed edges."""
        return all(self._pair_connected(u, v) for u, v in m.removed)

    def _pair_connected(self, s: int, t: int) -> bool:
        adj = self.adj
        if t in adj[s]:
            return True
        seen_a, seen_b = {s}, {t}
        front_a, front_b = {s}, {t}
        while front_a and front_b:
            if len(front_a) > len(front_b):
                seen_a, seen_b = seen_b, seen_a
                front_a, front_b = front_b, front_a
            nxt = set()
            for u in front_a:
                for v in adj[u]:
                    if v in seen_b:
                        return True
                    if v not in seen_a:
                        seen_a.add(v)
                        nxt.add(v)
            front_a = nxt
        return False

    def exact_apl(self) -> float:
        total, _ = bfs_distance_sums_padded(
            self.nbr, self.cnt, np.arange(self.n), self.n
        )
        if np.isnan(total):
            raise DisconnectedGraphError("working graph disconnected")
        return float(total / (self.n * (self.n - 1)))

    def sampled_apl(self, sources: np.ndarray) -> float:
        total, _ = bfs_distance_sums_padded(self.nbr, self.cnt, sources, self.n)
        if np.isnan(total):
            raise DisconnectedGraphError("working graph disconnected")
        return float(total / (len(sources) * (self.n - 1)))

    def to_graph(self) -> Graph:
        edges = [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]
        return Graph(self.n, edges)


def tune(
    g: Graph,
    objective: Objective,
    schedule: AnnealSchedule | None = None,
    rng: np.random.Generator | None = None,
) -> TuneResult:
    """Anneal one metric toward its target with degree-preserving moves.

    For the APL metric only AplSwap moves are used (CC stays exactly fixed);
    for CC the move kind follows the sign of (current - target). Disconnecting
    candidates are rejected before the Metropolis step. The returned
    ``achieved`` value is always recomputed exactly on the final graph.
    """
    schedule = schedule or AnnealSchedule()
    rng = rng if rng is not None else np.random.default_rng(0)
    if not is_connected(g):
        raise DisconnectedGraphError("tune requires a connected graph")

    w = _Working(g)
    metric = objective.metric
    tol = schedule.resolved_tol(metric)
    cap = schedule.max_propose_attempts
    target = objective.target
    use_sampled = metric is Metric.APL and g.n >= schedule.apl_sample_threshold
    n_sources = min(schedule.apl_sample_sources, g.n) if use_sampled else g.n
    sources = (
        np.sort(rng.choice(g.n, size=n_sources, replace=False)) if use_sampled else None
    )

    def eval_metric() -> float:
        if metric is Metric.CC:
            return w.cc
        return w.sampled_apl(sources) if use_sampled else w.exact_apl()

    cur = eval_metric()
    energy = abs(cur - target)
    accepted = 0
    rejected = {"disconnected": 0, "metropolis": 0, "propose_failed": 0}
    trace = []

    def finish(status: str) -> TuneResult:
        graph = w.to_graph()
        if metric is Metric.APL:
            achieved = average_path_length(graph).apl
            res = TuneResult(graph, achieved, status == "converged", status,
                             accepted, rejected, trace, achieved_apl=achieved)
        else:
            achieved = transitivity(graph).cc
            res = TuneResult(graph, achieved, status == "converged", status,
                             accepted, rejected, trace, achieved_cc=achieved)
        return res

    last_check = -(10**9)

    def redraw_sources() -> None:
        nonlocal sources, cur, energy
        sources = np.sort(rng.choice(g.n, size=n_sources, replace=False))
        cur = eval_metric()
        energy = abs(cur - target)

    def verify() -> bool:
        """Sampled estimator hit the target band: confirm against exact APL.

        On failure the source set is redrawn so the anneal cannot keep
        overfitting the one it was scored on. Returns True when the exact
        metric is within tolerance.
        """
        nonlocal last_check
        last_check = accepted
        if abs(w.exact_apl() - target) <= tol:
            return True
        redraw_sources()
        return False

    if energy <= tol:
        if not use_sampled or verify():
            return finish("converged")

    temperature = schedule.t0 if schedule.t0 is not None else 10.0 * energy
    if temperature <= 0:
        temperature = tol  # degenerate start: already at target within float eps
    stall = 0

    for it in range(schedule.max_iters):
        if metric is Metric.APL:
            # Far from the target, directed swaps (create or dismantle
            # long-range shortcuts) take much larger steps per evaluation;
            # near it, mix in uniform proposals for fine adjustment.
            move = None
            if energy > 4.0 * tol or rng.random() < 0.5:
                directed = (
                    _propose_apl_shortcut if cur > target else _propose_apl_unshortcut
                )
                move = directed(w, rng, cap)
            if move is None:
                move = propose_apl_move(w, rng, cap)
            if move is None:
                rejected["propose_failed"] += 1
                return finish("no_progress")
        else:
            decrease = (
                _propose_cc_decrease_local
                if schedule.local_cc_moves
                else propose_cc_decrease_move
            )
            primary = decrease if cur > target else propose_cc_increase_move
            secondary = propose_cc_increase_move if cur > target else decrease
            move = primary(w, rng, cap)
            if move is None and primary is _propose_cc_decrease_local:
                move = propose_cc_decrease_move(w, rng, cap)
            if move is None:
                move = secondary(w, rng, cap)
            if move is None:
                rejected["propose_failed"] += 1
                return finish("no_progress")

        w.apply(move)
        if not w.connected_after(move):
            w.revert(move)
            rejected["disconnected"] += 1
            stall += 1
            if stall >= schedule.stall_limit:
                return finish("no_progress")
            continue

        new = eval_metric()
        delta = abs(new - target) - energy
        if metropolis_accept(delta, temperature, rng):
            accepted += 1
            stall = 0
            cur = new
            energy = abs(cur - target)
            trace.append((it, cur, temperature))
            if accepted % schedule.epoch_len == 0:
                temperature *= schedule.cooling
                if use_sampled:
                    # A fixed source set drifts from the exact metric as the
                    # anneal overfits it; redrawing every epoch keeps the
                    # estimator honest while deltas within an epoch stay
                    # consistent.
                    redraw_sources()
            if energy <= tol:
                if not use_sampled:
                    return finish("converged")
                if accepted - last_check >= 5 and verify():
                    return finish("converged")
        else:
            w.revert(move)
            rejected["metropolis"] += 1
            stall += 1
            if stall >= schedule.stall_limit:
                return finish("no_progress")

    return finish("no_progress")


def tune_joint(
    g: Graph,
    cc_target: float,
    apl_target: float,
    schedule: AnnealSchedule | None = None,
    rng: np.random.Generator | None = None,
    tol_cc: float = DEFAULT_TOL_CC,
    tol_apl: float = DEFAULT_TOL_APL,
    max_rounds: int = 10,
) -> TuneResult:
    """Alternate CC tuning and CC-preserving APL tuning until both targets hold.

    Raises TargetsInfeasibleError (with the best result attached) when two
    successive rounds fail to reduce the combined normalized objective.
    """
    schedule = schedule or AnnealSchedule()
    rng = rng if rng is not None else np.random.default_rng(0)
    Objective(Metric.CC, cc_target)
    Objective(Metric.APL, apl_target)

    cur = g
    cc_now = transitivity(cur).cc
    apl_now = average_path_length(cur).apl
    accepted = 0
    rejected: dict = {}
    trace: list = []
    prev_combined = math.inf
    strikes = 0

    def merge(res: TuneResult) -> None:
        nonlocal accepted
        accepted += res.accepted
        for k, v in res.rejected_by_reason.items():
            rejected[k] = rejected.get(k, 0) + v
        trace.extend(res.objective_trace)

    def make_result(status: str) -> TuneResult:
        return TuneResult(
            cur, apl_now, status == "converged", status, accepted, rejected,
            trace, achieved_apl=apl_now, achieved_cc=cc_now,
        )

    for _round in range(max_rounds):
        cc_moved = False
        if abs(cc_now - cc_target) > tol_cc:
            # When the APL is at or below its target, CC moves must not
            # shorten paths: pair CC-decrease nodes locally. When the APL
            # sits well above target, global pairs usefully pull it down.
            local = apl_now <= apl_target + 10 * tol_apl
            sub = AnnealSchedule(
                **{**schedule.__dict__, "tol": tol_cc, "local_cc_moves": local}
            )
            res = tune(cur, Objective(Metric.CC, cc_target), sub, rng)
            merge(res)
            cur = res.graph
            cc_now = res.achieved
            cc_moved = res.accepted > 0  # CC moves also perturb the APL
        if cc_moved or abs(apl_now - apl_target) > tol_apl:
            sub = AnnealSchedule(**{**schedule.__dict__, "tol": tol_apl})
            res = tune(cur, Objective(Metric.APL, apl_target), sub, rng)
            merge(res)
            cur = res.graph
            apl_now = res.achieved
            cc_now = transitivity(cur).cc  # APL moves preserve this exactly
        if abs(cc_now - cc_target) <= tol_cc and abs(apl_now - apl_target) <= tol_apl:
            return make_result("converged")
        combined = abs(cc_now - cc_target) / tol_cc + abs(apl_now - apl_target) / tol_apl
        if combined >= prev_combined * 0.99:
            strikes += 1
            if strikes >= 2:
                raise TargetsInfeasibleError(
                    f"joint tuning plateaued at cc={cc_now:.4f}, apl={apl_now:.4f}",
                    result=make_result("no_progress"),
                )
        else:
            strikes = 0
        prev_combined = min(prev_combined, combined)

    return make_result("no_progress")
