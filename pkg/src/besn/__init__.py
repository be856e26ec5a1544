"""Binary echo state network simulator and analysis toolkit."""

from .dynamics import (
    StepConfig,
    Trajectory,
    flip_neuron,
    local_field,
    random_initial_state,
    run,
    step,
)
from .experiments import (
    BoundaryFit,
    PerturbationEnsembleResult,
    SweepGrid,
    extract_boundary,
    run_perturbation_ensemble,
    sweep_noise,
    sweep_noise_phase,
    sweep_phase,
    sweep_signal,
)
from .metrics import activity, energy, entropy, hamming, indicator_series, mean_entropy
from .reservoir import Reservoir, ReservoirParams, generate_reservoir
from .signals import SignalSpec, sample
from .theory import (
    MeanFieldStats,
    chaos_condition,
    critical_asymmetry,
    critical_degree,
    mean_field_stats,
    noisy_boundary_d,
    noisy_critical_degree,
)

__version__ = "0.1.0"
