"""Small-world topology tuning and SIRS epidemic analysis.

Pipeline: generate Watts-Strogatz graphs, tune their average path length
and clustering coefficient independently at fixed degrees, run discrete
SIRS dynamics, and locate the stationary/oscillatory transition with STFT
classification and equation-free coarse fixed points.
"""

from .graph import (
    Graph,
    PathStats,
    ClusteringStats,
    average_path_length,
    sampled_apl,
    transitivity,
    triangle_counts,
    is_connected,
    common_neighbors,
    edge_in_triangle,
    degree_sequence,
    read_edge_list,
    write_edge_list,
)
from .generate import WsParams, ring_lattice, watts_strogatz
from .tuner import (
    MoveKind,
    Metric,
    RewireMove,
    Objective,
    AnnealSchedule,
    TuneResult,
    propose_apl_move,
    propose_cc_decrease_move,
    propose_cc_increase_move,
    apply_move,
    metropolis_accept,
    tune,
    tune_joint,
)
from .epidemic import (
    EpidemicParams,
    EpidemicState,
    DensitySeries,
    SUSCEPTIBLE,
    INFECTED,
    RECOVERED,
    infection_probability,
    seed_state,
    step,
    run,
    run_from_state,
)
from .coarse import (
    Spectrogram,
    RegimeReport,
    CoarseState,
    CoarseFixedPoint,
    SolverSettings,
    SweepSettings,
    SweepPoint,
    stft,
    classify_regime,
    lift,
    restrict,
    coarse_timestep,
    coarse_fixed_point,
    bifurcation_sweep,
    write_sweep_csv,
)
from .rng import derive_seed, make_rng
from . import errors
from .errors import (
    SwepiError,
    InvalidParamsError,
    InvalidNodeError,
    NotAnEdgeError,
    DisconnectedGraphError,
    GenerationFailedError,
    StaleMoveError,
    InvalidTemperatureError,
    TargetsInfeasibleError,
    SeriesTooShortError,
    InvalidCoarseStateError,
)

__version__ = "0.1.0"
