"""Discrete-time stochastic SIRS dynamics on a graph.

A susceptible node becomes infected with probability equal to its own
infected-neighbor fraction n/k; infection lasts exactly tau_i steps and
immunity exactly tau_r steps (deterministic clocks). Updates are
synchronous from the time-t configuration.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParamsError
from .graph import Graph

logger = logging.getLogger(__name__)

SUSCEPTIBLE = 0
INFECTED = 1
RECOVERED = 2

# Defaults are configuration choices for this artifact, not literature values.
DEFAULT_TAU_I = 4
DEFAULT_TAU_R = 9
DEFAULT_INIT_INFECTED = 0.1


@dataclass(frozen=True)
class EpidemicParams:
    tau_i: int = DEFAULT_TAU_I
    tau_r: int = DEFAULT_TAU_R
    init_infected_frac: float = DEFAULT_INIT_INFECTED
    init_recovered_frac: float = 0.0

    def __post_init__(self):
        if self.tau_i < 1 or self.tau_r < 1:
            raise InvalidParamsError("tau_i and tau_r must be >= 1")
        fi, fr = self.init_infected_frac, self.init_recovered_frac
        if not (0.0 <= fi <= 1.0 and 0.0 <= fr <= 1.0 and fi + fr <= 1.0):
            raise InvalidParamsError("initial fractions must lie in [0,1] and sum <= 1")


@dataclass
class EpidemicState:
    status: np.ndarray  # int8: SUSCEPTIBLE / INFECTED / RECOVERED
    age: np.ndarray     # steps in the current compartment (1-based; 0 for S)
    t: int = 0

    def counts(self) -> tuple:
        s = int(np.count_nonzero(self.status == SUSCEPTIBLE))
        i = int(np.count_nonzero(self.status == INFECTED))
        r = int(np.count_nonzero(self.status == RECOVERED))
        return s, i, r


@dataclass
class DensitySeries:
    t: np.ndarray
    s: np.ndarray
    i: np.ndarray
    r: np.ndarray
    rho_i: np.ndarray

    @property
    def n(self) -> int:
        return int(self.s[0] + self.i[0] + self.r[0])

    def to_csv(self, path) -> None:
        lines = ["t,S,I,R,rho_I"]
        for k in range(len(self.t)):
            lines.append(
                f"{self.t[k]},{self.s[k]},{self.i[k]},{self.r[k]},{self.rho_i[k]:.6f}"
            )
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def infection_probability(j: int, state: EpidemicState, g: Graph) -> float:
    """n_j / k_j: the fraction of j's neighbors currently infected."""
    k = g.degree(j)
    if k == 0:
        logger.warning("isolated node %d has no neighbors; infection probability 0", j)
        return 0.0
    n_inf = sum(1 for v in g.adj[j] if state.status[v] == INFECTED)
    return n_inf / k


def seed_state(g: Graph, params: EpidemicParams, rng: np.random.Generator) -> EpidemicState:
    """Random initial condition with uniformly distributed compartment ages."""
    n = g.n
    ni = int(params.init_infected_frac * n)
    nr = int(params.init_recovered_frac * n)
    order = rng.permutation(n)
    status = np.zeros(n, dtype=np.int8)
    age = np.zeros(n, dtype=np.int32)
    inf = order[:ni]
    rec = order[ni:ni + nr]
    status[inf] = INFECTED
    age[inf] = rng.integers(1, params.tau_i + 1, size=ni)
    status[rec] = RECOVERED
    age[rec] = rng.integers(1, params.tau_r + 1, size=nr)
    return EpidemicState(status=status, age=age, t=0)


def step(
    state: EpidemicState,
    g: Graph,
    params: EpidemicParams,
    rng: np.random.Generator,
) -> EpidemicState:
    """One synchronous SIRS update; draws one uniform per node, in node order."""
    status, age = state.status, state.age
    infected = status == INFECTED
    n_inf = np.asarray(g.csr().dot(infected.astype(np.float64)))
    deg = g.degrees()
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(deg > 0, n_inf / np.maximum(deg, 1), 0.0)
    u = rng.random(g.n)
    new_inf = (status == SUSCEPTIBLE) & (u < p)

    nxt_status = status.copy()
    nxt_age = age.copy()

    recovering = infected & (age >= params.tau_i)
    aging_inf = infected & ~recovering
    waning = (status == RECOVERED) & (age >= params.tau_r)
    aging_rec = (status == RECOVERED) & ~waning

    nxt_status[recovering] = RECOVERED
    nxt_age[recovering] = 1
    nxt_age[aging_inf] += 1
    nxt_status[waning] = SUSCEPTIBLE
    nxt_age[waning] = 0
    nxt_age[aging_rec] += 1
    nxt_status[new_inf] = INFECTED
    nxt_age[new_inf] = 1

    return EpidemicState(status=nxt_status, age=nxt_age, t=state.t + 1)


def run_from_state(
    state: EpidemicState,
    g: Graph,
    params: EpidemicParams,
    steps: int,
    rng: np.random.Generator,
) -> tuple:
    """Iterate ``steps`` updates; returns (final state, DensitySeries).

    The series has steps+1 rows including the initial configuration.
    """
    if steps < 1:
        raise InvalidParamsError("steps must be >= 1")
    n = g.n
    t = np.arange(steps + 1, dtype=np.int64)
    s_arr = np.zeros(steps + 1, dtype=np.int64)
    i_arr = np.zeros(steps + 1, dtype=np.int64)
    r_arr = np.zeros(steps + 1, dtype=np.int64)
    s_arr[0], i_arr[0], r_arr[0] = state.counts()
    for k in range(1, steps + 1):
        state = step(state, g, params, rng)
        s_arr[k], i_arr[k], r_arr[k] = state.counts()
    series = DensitySeries(t=t, s=s_arr, i=i_arr, r=r_arr, rho_i=i_arr / n)
    return state, series


def run(
    g: Graph,
    params: EpidemicParams,
    steps: int,
    rng: np.random.Generator,
) -> DensitySeries:
    """Seed a random initial state and simulate; deterministic given the rng."""
    state = seed_state(g, params, rng)
    _, series = run_from_state(state, g, params, steps, rng)
    return series
