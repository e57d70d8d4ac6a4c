"""Deterministic laboratory for winding-generated almost-periodic phase
sequences and the exchanged-pair correlation experiment."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DimensionError,
    DomainError,
    ResourceGuardError,
    WindingPhaseError,
)
from .topology import (
    TWO_PI,
    CycleAssignment,
    IncommensurabilityReport,
    PairVerdict,
    SurfaceSpec,
    U1Phase,
    WindingChain,
    certify_incommensurable,
    chain_compose,
    holonomy_loop,
    pairing,
    wrap_angle,
)
from .sequence import (
    AlmostPeriodCandidate,
    AlmostPeriodReport,
    PhaseEvent,
    PhaseSequence,
    RandomnessReport,
    bohr_mean,
    event_arrays,
    event_count,
    events_in,
    find_almost_periods,
    fourier_bohr_coefficient,
    phase_at,
    phase_at_many,
    randomness_battery,
    score_phase_samples,
)
from .eventlog import read_event_log, write_event_log
from .correlation import (
    ChshResult,
    CorrelationEstimate,
    PairConfig,
    chsh,
    correlation,
    measure,
    relative_phase,
    residual_curve,
)
from .config import (
    ExperimentConfig,
    config_digest,
    config_to_dict,
    load_config,
    parse_config,
    save_config,
)
from .cli import RunManifest, build_pair, build_sequences, run_subcommand

__all__ = [
    "TWO_PI",
    "AlmostPeriodCandidate",
    "AlmostPeriodReport",
    "ChshResult",
    "ConfigError",
    "CorrelationEstimate",
    "CycleAssignment",
    "DimensionError",
    "DomainError",
    "ExperimentConfig",
    "IncommensurabilityReport",
    "PairConfig",
    "PairVerdict",
    "PhaseEvent",
    "PhaseSequence",
    "RandomnessReport",
    "ResourceGuardError",
    "RunManifest",
    "SurfaceSpec",
    "U1Phase",
    "WindingChain",
    "WindingPhaseError",
    "bohr_mean",
    "build_pair",
    "build_sequences",
    "certify_incommensurable",
    "chain_compose",
    "chsh",
    "config_digest",
    "config_to_dict",
    "correlation",
    "event_arrays",
    "event_count",
    "events_in",
    "find_almost_periods",
    "fourier_bohr_coefficient",
    "holonomy_loop",
    "load_config",
    "measure",
    "pairing",
    "parse_config",
    "phase_at",
    "phase_at_many",
    "randomness_battery",
    "read_event_log",
    "relative_phase",
    "residual_curve",
    "run_subcommand",
    "save_config",
    "score_phase_samples",
    "wrap_angle",
    "write_event_log",
]
