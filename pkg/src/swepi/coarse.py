"""Coarse-grained analysis of epidemic time series.

Covers the macroscopic side of the pipeline: STFT-based detection of
self-sustained oscillations, lifting/restriction between coarse densities
and microscopic states, a stochastic coarse time-stepper, damped-Newton
coarse fixed points with multiplier-based stability, and the bifurcation
sweep that chains tuned graphs along an APL or CC axis.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .epidemic import (
    EpidemicParams,
    EpidemicState,
    DensitySeries,
    INFECTED,
    RECOVERED,
    run,
    run_from_state,
    seed_state,
)
from .errors import (
    InvalidCoarseStateError,
    InvalidParamsError,
    SeriesTooShortError,
    TargetsInfeasibleError,
)
from .graph import Graph, average_path_length, transitivity
from .rng import derive_seed, make_rng
from .tuner import AnnealSchedule, Metric, tune_joint, DEFAULT_TOL_APL, DEFAULT_TOL_CC

DEFAULT_WINDOW = 256
DEFAULT_HOP = 64
DEFAULT_PEAK_RATIO = 5.0

EXTINCT = "extinct"
STATIONARY = "stationary"
OSCILLATORY = "oscillatory"


@dataclass(frozen=True)
class Spectrogram:
    window_len: int
    hop: int
    starts: np.ndarray       # frame start indices
    magnitudes: np.ndarray   # frames x bins, |rfft| of mean-removed Hann frames
    freqs: np.ndarray        # cycles per step per bin


def _hann(window_len: int) -> np.ndarray:
    n = np.arange(window_len)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * n / window_len))


def stft(series: np.ndarray, window_len: int, hop: int) -> Spectrogram:
    """Short-time Fourier magnitudes of mean-removed, Hann-windowed frames."""
    x = np.asarray(series, dtype=np.float64)
    if hop < 1:
        raise InvalidParamsError("hop must be >= 1")
    if window_len > len(x):
        raise SeriesTooShortError(
            f"series length {len(x)} shorter than window {window_len}"
        )
    w = _hann(window_len)
    starts = np.arange(0, len(x) - window_len + 1, hop)
    mags = np.empty((len(starts), window_len // 2 + 1))
    for f, s in enumerate(starts):
        seg = x[s:s + window_len]
        mags[f] = np.abs(np.fft.rfft((seg - seg.mean()) * w))
    freqs = np.fft.rfftfreq(window_len)
    return Spectrogram(window_len, hop, starts, mags, freqs)


def tone_amplitude(spec: Spectrogram, bin_index: int, halfwidth: int = 2) -> float:
    """Amplitude of a sinusoidal component from spectral energy near its peak.

    Sums |Y|^2 over peak +- halfwidth bins (covering the Hann main lobe) and
    inverts Parseval for a windowed tone: A = 2 sqrt(E / (W sum w^2)).
    """
    w = _hann(spec.window_len)
    lo = max(bin_index - halfwidth, 1)
    hi = min(bin_index + halfwidth + 1, spec.magnitudes.shape[1])
    energy = (spec.magnitudes[:, lo:hi] ** 2).sum(axis=1).mean()
    return float(2.0 * math.sqrt(energy / (spec.window_len * (w ** 2).sum())))


@dataclass(frozen=True)
class RegimeReport:
    regime: str
    mean_rho_i: float
    amplitude: float          # half the mean peak-to-peak excursion per window
    amplitude_max: float      # half the largest single-window excursion
    dominant_period: float | None


def classify_regime(
    series: DensitySeries,
    burn_in: int,
    window_len: int = DEFAULT_WINDOW,
    hop: int = DEFAULT_HOP,
    peak_ratio: float = DEFAULT_PEAK_RATIO,
) -> RegimeReport:
    """Label a density series Extinct / Stationary / Oscillatory.

    Oscillatory means the dominant nonzero-frequency peak of the mean
    post-burn-in spectrum exceeds ``peak_ratio`` times the median magnitude
    (a scale-free noise-floor estimate).
    """
    rho = series.rho_i[burn_in:]
    if len(rho) <= window_len:
        raise SeriesTooShortError("post-burn-in series shorter than the STFT window")
    if series.i[-1] == 0:
        return RegimeReport(EXTINCT, 0.0, 0.0, 0.0, None)

    spec = stft(rho, window_len, hop)
    mean_mag = spec.magnitudes.mean(axis=0)
    peak_bin = 1 + int(np.argmax(mean_mag[1:]))
    noise = float(np.median(mean_mag[1:]))
    oscillatory = noise > 0 and mean_mag[peak_bin] >= peak_ratio * noise

    nwin = len(rho) // window_len
    chunks = rho[: nwin * window_len].reshape(nwin, window_len)
    excursions = (chunks.max(axis=1) - chunks.min(axis=1)) / 2.0
    amplitude = float(excursions.mean())
    amplitude_max = float(excursions.max())
    mean_rho = float(rho.mean())

    if oscillatory:
        period = window_len / peak_bin
        return RegimeReport(OSCILLATORY, mean_rho, amplitude, amplitude_max, period)
    return RegimeReport(STATIONARY, mean_rho, amplitude, amplitude_max, None)


@dataclass(frozen=True)
class CoarseState:
    rho_i: float
    rho_r: float

    def __post_init__(self):
        if not (0.0 <= self.rho_i and 0.0 <= self.rho_r and self.rho_i + self.rho_r <= 1.0 + 1e-12):
            raise InvalidCoarseStateError(
                f"invalid coarse state ({self.rho_i}, {self.rho_r})"
            )


def lift(
    coarse: CoarseState,
    g: Graph,
    params: EpidemicParams,
    rng: np.random.Generator,
) -> EpidemicState:
    """Coarse -> micro: random node assignment with uniform compartment ages."""
    lifted = EpidemicParams(
        tau_i=params.tau_i,
        tau_r=params.tau_r,
        init_infected_frac=coarse.rho_i,
        init_recovered_frac=coarse.rho_r,
    )
    return seed_state(g, lifted, rng)


def restrict(state: EpidemicState) -> CoarseState:
    """Micro -> coarse: compartment densities."""
    n = len(state.status)
    return CoarseState(
        rho_i=float(np.count_nonzero(state.status == INFECTED)) / n,
        rho_r=float(np.count_nonzero(state.status == RECOVERED)) / n,
    )


def coarse_timestep(
    coarse: CoarseState,
    g: Graph,
    params: EpidemicParams,
    horizon: int,
    replicas: int,
    rng: np.random.Generator,
) -> CoarseState:
    """The coarse map Phi: lift, run ``horizon`` steps, restrict, replica-mean.

    Aggregation is in replica-index order, so the result depends only on the
    generator state, never on execution order.
    """
    if horizon < 1 or replicas < 1:
        raise InvalidParamsError("horizon and replicas must be >= 1")
    seeds = rng.integers(0, 2 ** 63, size=replicas)
    acc_i = 0.0
    acc_r = 0.0
    for rep in range(replicas):
        sub = np.random.default_rng(int(seeds[rep]))
        state = lift(coarse, g, params, sub)
        state, _ = run_from_state(state, g, params, horizon, sub)
        out = restrict(state)
        acc_i += out.rho_i
        acc_r += out.rho_r
    return CoarseState(rho_i=acc_i / replicas, rho_r=acc_r / replicas)


@dataclass
class SolverSettings:
    fd_step: float = 0.01
    newton_tol: float = 1e-3
    max_iters: int = 20
    max_damping: int = 8
    horizon: int = 20
    replicas: int = 32


@dataclass(frozen=True)
class CoarseFixedPoint:
    state: CoarseState
    residual: float
    multipliers: tuple
    stable: bool
    converged: bool


def _clip_coarse(vec: np.ndarray) -> np.ndarray:
    v = np.clip(vec, 0.0, 1.0)
    total = v.sum()
    if total > 1.0:
        v = v / total
    return v


def coarse_fixed_point(
    guess: CoarseState,
    g: Graph,
    params: EpidemicParams,
    cfg: SolverSettings | None = None,
    rng: np.random.Generator | None = None,
) -> CoarseFixedPoint:
    """Damped Newton on G(c) = Phi(c) - c with a finite-difference Jacobian.

    Every Phi evaluation reuses the same replica seeds (common random
    numbers), which makes the map deterministic for the solver and keeps
    stochastic noise out of the Jacobian stencil. Non-convergence is
    reported in the result, never raised.
    """
    cfg = cfg or SolverSettings()
    rng = rng if rng is not None else np.random.default_rng(0)
    crn_seed = int(rng.integers(0, 2 ** 63))

    def phi(vec: np.ndarray) -> np.ndarray:
        c = CoarseState(rho_i=float(vec[0]), rho_r=float(vec[1]))
        out = coarse_timestep(
            c, g, params, cfg.horizon, cfg.replicas, np.random.default_rng(crn_seed)
        )
        return np.array([out.rho_i, out.rho_r])

    def jacobian(vec: np.ndarray) -> np.ndarray:
        J = np.zeros((2, 2))
        for k in range(2):
            hp = vec.copy()
            hm = vec.copy()
            hp[k] += cfg.fd_step
            hm[k] -= cfg.fd_step
            hp = _clip_coarse(hp)
            hm = _clip_coarse(hm)
            denom = hp[k] - hm[k]
            if denom == 0.0:
                continue
            J[:, k] = (phi(hp) - phi(hm)) / denom
        return J

    c = _clip_coarse(np.array([guess.rho_i, guess.rho_r]))
    gval = phi(c) - c
    res = float(np.linalg.norm(gval))
    J = None
    converged = res <= cfg.newton_tol

    for _ in range(cfg.max_iters):
        if converged:
            break
        J = jacobian(c)
        A = J - np.eye(2)
        try:
            dc = np.linalg.solve(A, -gval)
        except np.linalg.LinAlgError:
            dc = -np.linalg.pinv(A) @ gval
        lam = 1.0
        improved = False
        for _half in range(cfg.max_damping + 1):
            cand = _clip_coarse(c + lam * dc)
            gcand = phi(cand) - cand
            rcand = float(np.linalg.norm(gcand))
            if rcand < res:
                c, gval, res = cand, gcand, rcand
                improved = True
                break
            lam /= 2.0
        if not improved:
            break
        converged = res <= cfg.newton_tol

    if J is None:
        J = jacobian(c)
    eig = np.linalg.eigvals(J)
    multipliers = tuple(sorted(float(abs(x)) for x in eig))
    return CoarseFixedPoint(
        state=CoarseState(rho_i=float(c[0]), rho_r=float(c[1])),
        residual=res,
        multipliers=multipliers,
        stable=all(m < 1.0 for m in multipliers),
        converged=bool(converged),
    )


@dataclass
class SweepSettings:
    sim_steps: int = 2000
    ensemble: int = 3
    burn_in: int | None = None           # None: half the series
    window_len: int = DEFAULT_WINDOW
    hop: int = DEFAULT_HOP
    peak_ratio: float = DEFAULT_PEAK_RATIO
    schedule: AnnealSchedule = field(default_factory=AnnealSchedule)
    tol_cc: float = DEFAULT_TOL_CC
    tol_apl: float = DEFAULT_TOL_APL
    newton: SolverSettings = field(default_factory=SolverSettings)
    compute_fixed_point: bool = True
    workers: int = 1


@dataclass
class SweepPoint:
    axis: str
    target: float
    achieved_apl: float
    achieved_cc: float
    mean_i: float
    amplitude_mean: float
    amplitude_max: float
    dominant_period: float | None
    regime: str
    fp_rho_i: float
    fp_residual: float
    fp_max_multiplier: float
    fp_stable: bool
    seed: int


SWEEP_CSV_HEADER = (
    "axis,target,achieved_apl,achieved_cc,mean_I,amplitude_mean,amplitude_max,"
    "dominant_period,regime,fp_rho_I,fp_residual,fp_max_multiplier,fp_stable,seed"
)


def sweep_point_csv_row(p: SweepPoint) -> str:
    period = f"{p.dominant_period:.6f}" if p.dominant_period is not None else ""
    return (
        f"{p.axis},{p.target:.6f},{p.achieved_apl:.6f},{p.achieved_cc:.6f},"
        f"{p.mean_i:.6f},{p.amplitude_mean:.6f},{p.amplitude_max:.6f},"
        f"{period},{p.regime},{p.fp_rho_i:.6f},{p.fp_residual:.6f},"
        f"{p.fp_max_multiplier:.6f},{int(p.fp_stable)},{p.seed}"
    )


def write_sweep_csv(points, path) -> None:
    lines = [SWEEP_CSV_HEADER]
    lines.extend(sweep_point_csv_row(p) for p in points)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _sim_worker(args):
    g, params, steps, seed = args
    series = run(g, params, steps, np.random.default_rng(seed))
    return series


def _run_ensemble(g, params, steps, seeds, workers):
    tasks = [(g, params, steps, s) for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sim_worker, tasks))
    return [_sim_worker(t) for t in tasks]


def bifurcation_sweep(
    base: Graph,
    axis: Metric,
    fixed_value: float,
    targets,
    epidemic: EpidemicParams,
    cfg: SweepSettings | None = None,
    master_seed: int = 0,
) -> list:
    """One bifurcation-diagram row per target along the APL or CC axis.

    Each target is reached by joint tuning starting from the previous tuned
    graph (chaining minimizes rewiring work); an ensemble of simulations is
    classified, and a coarse fixed point with multipliers is attached.
    Tuning failures are recorded in the row and the sweep continues.
    """
    cfg = cfg or SweepSettings()
    points = []
    current = base
    burn_in = cfg.burn_in if cfg.burn_in is not None else cfg.sim_steps // 2

    for idx, target in enumerate(targets):
        if axis is Metric.APL:
            apl_t, cc_t = float(target), fixed_value
        else:
            apl_t, cc_t = fixed_value, float(target)

        tune_failed = None
        try:
            res = tune_joint(
                current, cc_t, apl_t,
                schedule=cfg.schedule,
                rng=make_rng(master_seed, "tune", idx),
                tol_cc=cfg.tol_cc,
                tol_apl=cfg.tol_apl,
            )
            current = res.graph
            if not res.converged:
                tune_failed = "tune_no_progress"
            achieved_apl = res.achieved_apl
            achieved_cc = res.achieved_cc
        except TargetsInfeasibleError as exc:
            tune_failed = "targets_infeasible"
            if exc.result is not None:
                current = exc.result.graph
                achieved_apl = exc.result.achieved_apl
                achieved_cc = exc.result.achieved_cc
            else:
                achieved_apl = average_path_length(current).apl
                achieved_cc = transitivity(current).cc

        seeds = [derive_seed(master_seed, f"sim:{idx}", rep) for rep in range(cfg.ensemble)]
        series_list = _run_ensemble(current, epidemic, cfg.sim_steps, seeds, cfg.workers)
        reports = [
            classify_regime(s, burn_in, cfg.window_len, cfg.hop, cfg.peak_ratio)
            for s in series_list
        ]

        labels = [r.regime for r in reports]
        regime = max(set(labels), key=labels.count)
        mean_i = float(np.mean([r.mean_rho_i for r in reports]))
        amp_mean = float(np.mean([r.amplitude for r in reports]))
        amp_max = float(np.max([r.amplitude_max for r in reports]))
        periods = [r.dominant_period for r in reports if r.dominant_period is not None]
        period = float(np.median(periods)) if periods else None

        mean_r = float(
            np.mean([s.r[burn_in:].mean() / s.n for s in series_list])
        )
        if cfg.compute_fixed_point:
            fp = coarse_fixed_point(
                CoarseState(rho_i=min(mean_i, 1.0 - mean_r), rho_r=mean_r),
                current,
                epidemic,
                cfg.newton,
                make_rng(master_seed, "newton", idx),
            )
            fp_rho_i = fp.state.rho_i
            fp_res = fp.residual
            fp_mult = max(fp.multipliers)
            fp_stable = fp.stable
        else:
            fp_rho_i = math.nan
            fp_res = math.nan
            fp_mult = math.nan
            fp_stable = False

        points.append(
            SweepPoint(
                axis=axis.value,
                target=float(target),
                achieved_apl=float(achieved_apl),
                achieved_cc=float(achieved_cc),
                mean_i=mean_i,
                amplitude_mean=amp_mean,
                amplitude_max=amp_max,
                dominant_period=period,
                regime=tune_failed or regime,
                fp_rho_i=fp_rho_i,
                fp_residual=fp_res,
                fp_max_multiplier=fp_mult,
                fp_stable=fp_stable,
                seed=master_seed,
            )
        )
    return points
