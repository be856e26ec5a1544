"""Sign-threshold dynamics of binary state vectors.

States are length-N int8 vectors with entries in {-1, +1}.  One step maps
x to sign(W @ x + u + nu*<k>*xi) componentwise, where u is the broadcast
scalar drive and xi is fresh per-neuron standard normal noise.  The
weighted sum is evaluated in integer arithmetic, so the autonomous case is
exact; zero local field maps to +1 by default (reproducible tie-breaking),
or holds the previous value when ``hold_at_zero`` is set.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import metrics, signals
from .reservoir import Reservoir

__all__ = [
    "State",
    "StepConfig",
    "Trajectory",
    "local_field",
    "step",
    "run",
    "random_initial_state",
    "flip_neuron",
    "write_trajectory_csv",
    "write_states_csv",
]

State = np.ndarray  # int8 vector of -1/+1 values


def validate_state(state: np.ndarray, n: int | None = None) -> np.ndarray:
    state = np.asarray(state)
    if state.ndim != 1:
        raise ValueError(f"state must be a 1-D vector, got shape {state.shape}")
    if n is not None and state.shape[0] != n:
        raise ValueError(f"state length {state.shape[0]} does not match reservoir size {n}")
    if not np.isin(state, (-1, 1)).all():
        raise ValueError("state entries must be -1 or +1")
    return state.astype(np.int8, copy=False)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return np.random.default_rng(int(rng))
    raise TypeError(f"rng must be a numpy Generator or an integer seed, got {type(rng)!r}")


@dataclass(frozen=True)
class StepConfig:
    """Per-step knobs of the update rule.

    noise_gain:    nu >= 0; the per-neuron noise std is nu * noise_scaling
    input_value:   broadcast scalar u added to every local field
    noise_scaling: factor multiplying nu; defaults to the reservoir's
                   mean_degree hyperparameter
    hold_at_zero:  if True, a zero local field keeps the previous value
                   instead of mapping to +1
    """

    noise_gain: float = 0.0
    input_value: float = 0.0
    noise_scaling: float | None = None
    hold_at_zero: bool = False

    def __post_init__(self) -> None:
        if self.noise_gain < 0:
            raise ValueError(f"noise_gain must be nonnegative, got {self.noise_gain}")


@dataclass(eq=False)
class Trajectory:
    """States for n = 0..T plus the drive values that produced them.

    ``states[t]`` is the state after t steps; ``inputs[t]`` is the drive
    value applied on the transition t -> t+1.  Indicator series are
    computed by the metrics module.
    """

    states: np.ndarray  # (T+1, N) int8
    inputs: np.ndarray  # (T,) float64
    params_snapshot: dict = field(default_factory=dict)

    @property
    def horizon(self) -> int:
        return self.states.shape[0] - 1

    @property
    def n_neurons(self) -> int:
        return self.states.shape[1]


def local_field(reservoir: Reservoir, state: np.ndarray, input_value: float = 0.0) -> np.ndarray:
    """S_i = sum_j W_ij x_j + u, as a float vector.  Pure, no randomness."""
    x = validate_state(state, reservoir.n)
    s = reservoir.weights @ x.astype(np.int32)
    return s.astype(np.float64) + float(input_value)


def _advance(
    reservoir: Reservoir,
    x: np.ndarray,
    cfg: StepConfig,
    rng: np.random.Generator | None,
) -> np.ndarray:
    """One synchronous update from a validated state; shared by step and run."""
    field_int = reservoir.weights @ x.astype(np.int32)
    u = cfg.input_value
    if cfg.noise_gain > 0.0:
        if rng is None:
            raise ValueError("an rng stream is required when noise_gain > 0")
        scaling = cfg.noise_scaling
        if scaling is None:
            scaling = reservoir.params.mean_degree
        noise = (cfg.noise_gain * scaling) * rng.standard_normal(x.shape[0])
        total = field_int + (noise + u)
    elif u != 0.0:
        total = field_int + u
    else:
        total = field_int
    if cfg.hold_at_zero:
        return np.where(total > 0, 1, np.where(total < 0, -1, x)).astype(np.int8)
    return np.where(total >= 0, 1, -1).astype(np.int8)


def step(
    reservoir: Reservoir,
    state: np.ndarray,
    cfg: StepConfig | None = None,
    rng: np.random.Generator | int | None = None,
) -> np.ndarray:
    """Apply the update rule once and return the new state."""
    if cfg is None:
        cfg = StepConfig()
    x = validate_state(state, reservoir.n)
    gen = _as_generator(rng) if rng is not None else None
    return _advance(reservoir, x, cfg, gen)


def run(
    reservoir: Reservoir,
    initial: np.ndarray,
    signal: signals.SignalSpec | None = None,
    noise_gain: float = 0.0,
    horizon: int = 300,
    rng: np.random.Generator | int | None = None,
    hold_at_zero: bool = False,
) -> Trajectory:
    """Iterate the update rule for ``horizon`` steps.

    The drive value applied on transition n -> n+1 is ``sample(signal, n)``.
    With noise_gain = 0 and a zero signal the trajectory is a pure function
    of (reservoir, initial, horizon); with noise, a fixed rng stream gives a
    bit-identical trajectory.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    x = validate_state(initial, reservoir.n).copy()
    if noise_gain < 0:
        raise ValueError(f"noise_gain must be nonnegative, got {noise_gain}")
    gen = _as_generator(rng) if rng is not None else None
    if noise_gain > 0 and gen is None:
        raise ValueError("an rng stream is required when noise_gain > 0")

    n = reservoir.n
    states = np.empty((horizon + 1, n), dtype=np.int8)
    inputs = np.zeros(horizon, dtype=np.float64)
    states[0] = x
    base = StepConfig(noise_gain=noise_gain, hold_at_zero=hold_at_zero)
    for t in range(horizon):
        u = signals.sample(signal, t) if signal is not None else 0.0
        inputs[t] = u
        cfg = base if u == 0.0 else StepConfig(
            noise_gain=noise_gain, input_value=u, hold_at_zero=hold_at_zero
        )
        x = _advance(reservoir, x, cfg, gen)
        states[t + 1] = x

    snapshot = {
        "n_neurons": n,
        "mean_degree": reservoir.params.mean_degree,
        "asymmetry": reservoir.params.asymmetry,
        "reservoir_seed": reservoir.params.seed,
        "noise_gain": noise_gain,
        "horizon": horizon,
        "hold_at_zero": hold_at_zero,
        "signal": signal.to_json_dict() if signal is not None else None,
    }
    return Trajectory(states=states, inputs=inputs, params_snapshot=snapshot)


def random_initial_state(
    n: int,
    positive_bias: float = 0.5,
    rng: np.random.Generator | int = 0,
) -> np.ndarray:
    """Each neuron independently +1 with probability ``positive_bias``."""
    if not 0.0 <= positive_bias <= 1.0:
        raise ValueError(f"positive_bias must lie in [0, 1], got {positive_bias}")
    gen = _as_generator(rng)
    return np.where(gen.random(n) < positive_bias, 1, -1).astype(np.int8)


def flip_neuron(state: np.ndarray, index: int) -> np.ndarray:
    """Copy of ``state`` with entry ``index`` negated; the original is unchanged."""
    x = validate_state(state)
    if not 0 <= index < x.shape[0]:
        raise IndexError(f"neuron index {index} out of range for N={x.shape[0]}")
    out = x.copy()
    out[index] = -out[index]
    return out


def write_trajectory_csv(
    trajectory: Trajectory, path: str | Path, reference: Trajectory | None = None
) -> None:
    """Per-step indicators as CSV columns (step, energy, activity, entropy).

    Activity is undefined at step 0 and left empty.  When ``reference`` is
    given, a hamming_to_reference column is appended.
    """
    series = metrics.indicator_series(trajectory, reference=reference)
    header = ["step", "energy", "activity", "entropy"]
    if reference is not None:
        header.append("hamming_to_reference")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t in range(trajectory.horizon + 1):
            row = [
                str(t),
                repr(float(series.energy[t])),
                "" if t == 0 else repr(float(series.activity[t])),
                repr(float(series.entropy[t])),
            ]
            if reference is not None:
                row.append(repr(float(series.hamming_to_reference[t])))
            writer.writerow(row)


def write_states_csv(trajectory: Trajectory, path: str | Path) -> None:
    """Raw state dump: one row of -1/+1 values per step (small N only)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for t in range(trajectory.horizon + 1):
            writer.writerow(int(v) for v in trajectory.states[t])
