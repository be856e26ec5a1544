"""Reproducible parameter sweeps, perturbation ensembles and boundary fits.

Each sweep cell aggregates R replicate runs; every replicate derives its
RNG streams from the master seed through SeedSequence spawn keys, so the
result is bit-identical regardless of worker scheduling.  Spawn keys are
(channel, d_index, replicate): the x coordinate is deliberately absent so
that cells along the x axis share reservoirs and initial conditions
(common random numbers), which makes boundary crossings move smoothly
under the swept knob.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import metrics
from .dynamics import flip_neuron, random_initial_state, run
from .reservoir import Reservoir, ReservoirParams, generate_reservoir
from .signals import SignalSpec

__all__ = [
    "SweepGrid",
    "PerturbationEnsembleResult",
    "BoundaryFit",
    "sweep_phase",
    "sweep_noise",
    "sweep_noise_phase",
    "sweep_signal",
    "run_perturbation_ensemble",
    "extract_boundary",
    "write_sweep_csv",
    "read_sweep_csv",
    "write_ensemble_csv",
]

# Stream channels for SeedSequence spawn keys.
_CH_RESERVOIR = 0
_CH_INIT = 1
_CH_NOISE = 2
_CH_SIGNAL = 3
_CH_FLIPS = 4


def _stream(master_seed: int, channel: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(master_seed, spawn_key=(channel, *key))
    return np.random.default_rng(ss)


def _stream_seed(master_seed: int, channel: int, *key: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=(channel, *key))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(eq=False)
class SweepGrid:
    """Mean and std of time-averaged entropy on an (x, d) grid.

    ``entropy_mean``/``entropy_std`` have shape (len(x_values),
    len(d_values)); stds are over the R replicates of each cell
    (population convention).
    """

    x_name: str
    x_values: np.ndarray
    d_values: np.ndarray
    entropy_mean: np.ndarray
    entropy_std: np.ndarray
    replicates: int
    base_config: dict = field(default_factory=dict)

    def d_cell_size(self) -> float:
        if len(self.d_values) < 2:
            return 0.0
        return float(np.median(np.diff(self.d_values)))

    def x_cell_size(self) -> float:
        if len(self.x_values) < 2:
            return 0.0
        return float(np.median(np.diff(self.x_values)))


@dataclass(eq=False)
class PerturbationEnsembleResult:
    """Per-step mean/std of the four indicators across M perturbed copies.

    Hamming distance is measured against the unperturbed reference
    trajectory; activity entries at step 0 are NaN.
    """

    steps: np.ndarray
    hamming_mean: np.ndarray
    hamming_std: np.ndarray
    energy_mean: np.ndarray
    energy_std: np.ndarray
    activity_mean: np.ndarray
    activity_std: np.ndarray
    entropy_mean: np.ndarray
    entropy_std: np.ndarray
    config: dict = field(default_factory=dict)

    def late_mean_entropy(self, t0: int) -> float:
        """Time average of the ensemble-mean entropy from step t0 on."""
        return float(self.entropy_mean[t0:].mean())


@dataclass(eq=False)
class BoundaryFit:
    """Threshold crossings of the entropy surface and their linear fit.

    ``crossings`` holds (x_value, d_star) for every column with a bracketed
    crossing; the line d* = slope*x + intercept is fitted over
    ``fitted_x`` (the auto-detected intermediate-regime columns, or all
    crossing columns when fewer than two qualify).
    """

    crossings: list[tuple[float, float]]
    slope: float
    intercept: float
    residual: float
    fitted_x: list[float]
    excluded_x: list[tuple[float, str]]
    non_monotone_x: list[float]
    threshold: float

    def to_json_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "crossings": [[x, d] for x, d in self.crossings],
            "fitted_x": list(self.fitted_x),
            "excluded_x": [[x, why] for x, why in self.excluded_x],
            "non_monotone_x": list(self.non_monotone_x),
        }


@dataclass(frozen=True)
class _CellJob:
    """Self-contained description of one sweep cell (picklable)."""

    x_index: int
    d_index: int
    n_neurons: int
    mean_degree: float
    asymmetry: float
    noise_gain: float
    signal: SignalSpec | None
    horizon: int
    burn_in: int
    replicates: int
    master_seed: int
    positive_bias: float


def _replicate_mean_entropy(job: _CellJob, r: int) -> float:
    res_seed = _stream_seed(job.master_seed, _CH_RESERVOIR, job.d_index, r)
    params = ReservoirParams(
        n_neurons=job.n_neurons,
        mean_degree=job.mean_degree,
        asymmetry=job.asymmetry,
        seed=res_seed,
    )
    reservoir = generate_reservoir(params)
    init = random_initial_state(
        job.n_neurons, job.positive_bias, rng=_stream(job.master_seed, _CH_INIT, job.d_index, r)
    )
    signal = job.signal
    if signal is not None and signal.kind == "white_noise":
        signal = replace(signal, seed=_stream_seed(job.master_seed, _CH_SIGNAL, job.d_index, r))
    noise_rng = (
        _stream(job.master_seed, _CH_NOISE, job.d_index, r) if job.noise_gain > 0 else None
    )
    traj = run(
        reservoir,
        init,
        signal=signal,
        noise_gain=job.noise_gain,
        horizon=job.horizon,
        rng=noise_rng,
    )
    return metrics.mean_entropy(traj, job.burn_in, job.horizon)


def _cell_stats(job: _CellJob) -> tuple[int, int, float, float, str | None]:
    try:
        values = np.array(
            [_replicate_mean_entropy(job, r) for r in range(job.replicates)]
        )
        return job.x_index, job.d_index, float(values.mean()), float(values.std()), None
    except Exception as exc:  # identify the offending cell for the driver
        return job.x_index, job.d_index, np.nan, np.nan, repr(exc)


def _execute_grid(jobs: list[_CellJob], nx: int, nd: int, jobs_workers: int | None):
    workers = jobs_workers if jobs_workers is not None else (os.cpu_count() or 1)
    mean = np.empty((nx, nd))
    std = np.empty((nx, nd))
    if workers <= 1:
        results = map(_cell_stats, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        try:
            chunk = max(1, len(jobs) // (4 * workers))
            results = list(pool.map(_cell_stats, jobs, chunksize=chunk))
        finally:
            pool.shutdown()
    for xi, di, m, s, err in results:
        if err is not None:
            raise RuntimeError(f"sweep cell (x_index={xi}, d_index={di}) failed: {err}")
        mean[xi, di] = m
        std[xi, di] = s
    return mean, std


def _base_config(**kwargs) -> dict:
    cfg = dict(kwargs)
    sig = cfg.get("signal")
    if isinstance(sig, SignalSpec):
        cfg["signal"] = sig.to_json_dict()
    return cfg


def sweep_phase(
    k_values,
    d_values,
    n_neurons: int = 1000,
    horizon: int = 300,
    burn_in: int = 100,
    replicates: int = 8,
    master_seed: int = 0,
    positive_bias: float = 0.5,
    jobs: int | None = None,
) -> SweepGrid:
    """Autonomous (mean_degree, asymmetry) sweep of time-averaged entropy."""
    k_values = np.asarray(k_values, dtype=np.float64)
    d_values = np.asarray(d_values, dtype=np.float64)
    _check_grid(k_values, d_values, horizon, burn_in, replicates)
    cells = [
        _CellJob(xi, di, n_neurons, float(k), float(d), 0.0, None,
                 horizon, burn_in, replicates, master_seed, positive_bias)
        for xi, k in enumerate(k_values)
        for di, d in enumerate(d_values)
    ]
    mean, std = _execute_grid(cells, len(k_values), len(d_values), jobs)
    return SweepGrid(
        x_name="mean_degree",
        x_values=k_values,
        d_values=d_values,
        entropy_mean=mean,
        entropy_std=std,
        replicates=replicates,
        base_config=_base_config(
            n_neurons=n_neurons, horizon=horizon, burn_in=burn_in,
            replicates=replicates, master_seed=master_seed,
            positive_bias=positive_bias, noise_gain=0.0, signal=None,
        ),
    )


def sweep_noise(
    mean_degree: float,
    noise_values,
    d_values,
    n_neurons: int = 1000,
    horizon: int = 300,
    burn_in: int = 100,
    replicates: int = 8,
    master_seed: int = 0,
    positive_bias: float = 0.5,
    jobs: int | None = None,
) -> SweepGrid:
    """Fixed-degree (noise_gain, asymmetry) sweep; noise std is nu*<k>."""
    noise_values = np.asarray(noise_values, dtype=np.float64)
    d_values = np.asarray(d_values, dtype=np.float64)
    _check_grid(noise_values, d_values, horizon, burn_in, replicates)
    if (noise_values < 0).any():
        raise ValueError("noise_gain values must be nonnegative")
    cells = [
        _CellJob(xi, di, n_neurons, float(mean_degree), float(d), float(nu), None,
                 horizon, burn_in, replicates, master_seed, positive_bias)
        for xi, nu in enumerate(noise_values)
        for di, d in enumerate(d_values)
    ]
    mean, std = _execute_grid(cells, len(noise_values), len(d_values), jobs)
    return SweepGrid(
        x_name="noise_gain",
        x_values=noise_values,
        d_values=d_values,
        entropy_mean=mean,
        entropy_std=std,
        replicates=replicates,
        base_config=_base_config(
            n_neurons=n_neurons, horizon=horizon, burn_in=burn_in,
            replicates=replicates, master_seed=master_seed,
            positive_bias=positive_bias, mean_degree=mean_degree, signal=None,
        ),
    )


def sweep_noise_phase(
    noise_gain: float,
    k_values,
    d_values,
    n_neurons: int = 1000,
    horizon: int = 300,
    burn_in: int = 100,
    replicates: int = 8,
    master_seed: int = 0,
    positive_bias: float = 0.5,
    jobs: int | None = None,
) -> SweepGrid:
    """(mean_degree, asymmetry) sweep at a fixed noise gain.

    With noise_gain = 0 this produces output identical to ``sweep_phase``
    under the same seeds.
    """
    if noise_gain < 0:
        raise ValueError(f"noise_gain must be nonnegative, got {noise_gain}")
    k_values = np.asarray(k_values, dtype=np.float64)
    d_values = np.asarray(d_values, dtype=np.float64)
    _check_grid(k_values, d_values, horizon, burn_in, replicates)
    cells = [
        _CellJob(xi, di, n_neurons, float(k), float(d), float(noise_gain), None,
                 horizon, burn_in, replicates, master_seed, positive_bias)
        for xi, k in enumerate(k_values)
        for di, d in enumerate(d_values)
    ]
    mean, std = _execute_grid(cells, len(k_values), len(d_values), jobs)
    return SweepGrid(
        x_name="mean_degree",
        x_values=k_values,
        d_values=d_values,
        entropy_mean=mean,
        entropy_std=std,
        replicates=replicates,
        base_config=_base_config(
            n_neurons=n_neurons, horizon=horizon, burn_in=burn_in,
            replicates=replicates, master_seed=master_seed,
            positive_bias=positive_bias, noise_gain=noise_gain, signal=None,
        ),
    )


def sweep_signal(
    mean_degree: float,
    signal_kind: str,
    gain_values,
    d_values,
    n_neurons: int = 1000,
    horizon: int = 300,
    burn_in: int = 100,
    replicates: int = 8,
    master_seed: int = 0,
    positive_bias: float = 0.5,
    frequencies: tuple[float, ...] | None = None,
    jobs: int | None = None,
) -> SweepGrid:
    """Fixed-degree (signal_gain, asymmetry) sweep under a broadcast drive."""
    if signal_kind not in ("white_noise", "multisine"):
        raise ValueError(
            f"signal_kind must be 'white_noise' or 'multisine', got {signal_kind!r}"
        )
    gain_values = np.asarray(gain_values, dtype=np.float64)
    d_values = np.asarray(d_values, dtype=np.float64)
    _check_grid(gain_values, d_values, horizon, burn_in, replicates)
    if (gain_values < 0).any():
        raise ValueError("gain values must be nonnegative")
    extra = {} if frequencies is None else {"frequencies": tuple(frequencies)}
    cells = [
        _CellJob(
            xi, di, n_neurons, float(mean_degree), float(d), 0.0,
            SignalSpec(kind=signal_kind, gain=float(a), **extra),
            horizon, burn_in, replicates, master_seed, positive_bias,
        )
        for xi, a in enumerate(gain_values)
        for di, d in enumerate(d_values)
    ]
    mean, std = _execute_grid(cells, len(gain_values), len(d_values), jobs)
    template = SignalSpec(kind=signal_kind, gain=1.0, **extra)
    return SweepGrid(
        x_name="signal_gain",
        x_values=gain_values,
        d_values=d_values,
        entropy_mean=mean,
        entropy_std=std,
        replicates=replicates,
        base_config=_base_config(
            n_neurons=n_neurons, horizon=horizon, burn_in=burn_in,
            replicates=replicates, master_seed=master_seed,
            positive_bias=positive_bias, mean_degree=mean_degree,
            signal=template,
        ),
    )


def _check_grid(x_values, d_values, horizon, burn_in, replicates) -> None:
    if len(x_values) == 0 or len(d_values) == 0:
        raise ValueError("sweep grid must be nonempty")
    if not 0 <= burn_in < horizon:
        raise ValueError(f"need 0 <= burn_in < horizon, got t0={burn_in}, T={horizon}")
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")


def run_perturbation_ensemble(
    n_neurons: int = 1000,
    mean_degree: float = 22.0,
    asymmetry: float = 0.15,
    positive_bias: float = 0.6,
    copies: int = 50,
    horizon: int = 300,
    master_seed: int = 0,
) -> PerturbationEnsembleResult:
    """Evolve M single-neuron perturbations of one reference trajectory.

    All copies share the same reservoir realization and the same biased
    random initial condition; copy m flips one distinct neuron at n = 0,
    so its Hamming distance to the reference starts at exactly 1/N.
    """
    if copies < 1:
        raise ValueError(f"copies must be >= 1, got {copies}")
    if copies > n_neurons:
        raise ValueError(
            f"copies ({copies}) cannot exceed n_neurons ({n_neurons}): "
            "flipped indices are drawn without replacement"
        )
    res_seed = _stream_seed(master_seed, _CH_RESERVOIR, 0, 0)
    params = ReservoirParams(n_neurons, mean_degree, asymmetry, seed=res_seed)
    reservoir = generate_reservoir(params)
    init = random_initial_state(
        n_neurons, positive_bias, rng=_stream(master_seed, _CH_INIT, 0, 0)
    )
    flip_rng = _stream(master_seed, _CH_FLIPS, 0, 0)
    flip_indices = flip_rng.choice(n_neurons, size=copies, replace=False)

    reference = run(reservoir, init, horizon=horizon)

    n_steps = horizon + 1
    ham = np.empty((copies, n_steps))
    eng = np.empty((copies, n_steps))
    act = np.empty((copies, n_steps))
    ent = np.empty((copies, n_steps))
    for m, idx in enumerate(flip_indices):
        traj = run(reservoir, flip_neuron(init, int(idx)), horizon=horizon)
        series = metrics.indicator_series(traj, reference=reference)
        ham[m] = series.hamming_to_reference
        eng[m] = series.energy
        act[m] = series.activity
        ent[m] = series.entropy

    config = {
        "n_neurons": n_neurons,
        "mean_degree": mean_degree,
        "asymmetry": asymmetry,
        "positive_bias": positive_bias,
        "copies": copies,
        "horizon": horizon,
        "master_seed": master_seed,
    }
    return PerturbationEnsembleResult(
        steps=np.arange(n_steps),
        hamming_mean=ham.mean(axis=0),
        hamming_std=ham.std(axis=0),
        energy_mean=eng.mean(axis=0),
        energy_std=eng.std(axis=0),
        activity_mean=np.concatenate(([np.nan], act[:, 1:].mean(axis=0))),
        activity_std=np.concatenate(([np.nan], act[:, 1:].std(axis=0))),
        entropy_mean=ent.mean(axis=0),
        entropy_std=ent.std(axis=0),
        config=config,
    )


def column_crossing(
    d_values: np.ndarray, profile: np.ndarray, threshold: float
) -> float | None:
    """Interpolated d at which a decreasing entropy profile crosses threshold.

    Returns None when the profile never brackets the threshold (all above:
    chaotic everywhere; all below: frozen everywhere).
    """
    d_values = np.asarray(d_values, dtype=np.float64)
    profile = np.asarray(profile, dtype=np.float64)
    for j in range(len(profile) - 1):
        hi, lo = profile[j], profile[j + 1]
        if hi >= threshold > lo:
            if hi == lo:
                return float(d_values[j])
            frac = (hi - threshold) / (hi - lo)
            return float(d_values[j] + frac * (d_values[j + 1] - d_values[j]))
    return None


def _is_non_monotone(profile: np.ndarray, tol: float = 0.1) -> bool:
    """Flags increases beyond replicate jitter in a nominally decreasing profile."""
    return bool((np.diff(profile) > tol).any())


def extract_boundary(grid: SweepGrid, threshold: float = 0.5) -> BoundaryFit:
    """Per-x threshold crossings along d, plus a least-squares line d* = a*x + b.

    The fit uses the intermediate-regime columns: those whose crossing
    differs from the crossing of the first (smallest-x) column by more than
    one d-grid cell.  When fewer than two columns qualify (for example a
    constant boundary), all crossing columns are used instead.  Columns
    with no crossing are excluded and reported.
    """
    crossings: list[tuple[float, float]] = []
    excluded: list[tuple[float, str]] = []
    non_monotone: list[float] = []
    for xi, x in enumerate(grid.x_values):
        profile = grid.entropy_mean[xi]
        if _is_non_monotone(profile):
            non_monotone.append(float(x))
        d_star = column_crossing(grid.d_values, profile, threshold)
        if d_star is None:
            side = "chaotic" if profile.min() > threshold else "frozen"
            excluded.append((float(x), f"no {threshold} crossing (column all-{side})"))
        else:
            crossings.append((float(x), d_star))

    if not crossings:
        raise ValueError("no column crosses the entropy threshold; nothing to fit")

    cell = grid.d_cell_size()
    baseline = crossings[0][1]
    intermediate = [(x, d) for x, d in crossings if abs(d - baseline) > cell]
    fit_set = intermediate if len(intermediate) >= 2 else crossings
    xs = np.array([x for x, _ in fit_set])
    ds = np.array([d for _, d in fit_set])
    if len(fit_set) >= 2 and np.ptp(xs) > 0:
        slope, intercept = np.polyfit(xs, ds, 1)
    else:
        slope, intercept = 0.0, float(ds.mean())
    residual = float(np.sqrt(np.mean((ds - (slope * xs + intercept)) ** 2)))
    return BoundaryFit(
        crossings=crossings,
        slope=float(slope),
        intercept=float(intercept),
        residual=residual,
        fitted_x=[float(x) for x in xs],
        excluded_x=excluded,
        non_monotone_x=non_monotone,
        threshold=threshold,
    )


def write_sweep_csv(grid: SweepGrid, path: str | Path) -> None:
    """CSV rows (x_name, x_value, d, entropy_mean, entropy_std, replicates)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x_name", "x_value", "d", "entropy_mean", "entropy_std", "replicates"])
        for xi, x in enumerate(grid.x_values):
            for di, d in enumerate(grid.d_values):
                writer.writerow([
                    grid.x_name,
                    repr(float(x)),
                    repr(float(d)),
                    repr(float(grid.entropy_mean[xi, di])),
                    repr(float(grid.entropy_std[xi, di])),
                    grid.replicates,
                ])


def read_sweep_csv(path: str | Path) -> SweepGrid:
    """Rebuild a SweepGrid from its CSV form (base_config is not stored there)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"x_name", "x_value", "d", "entropy_mean", "entropy_std", "replicates"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            missing = sorted(required - set(reader.fieldnames or ()))
            raise ValueError(f"sweep CSV missing columns: {missing}")
        rows = list(reader)
    if not rows:
        raise ValueError("sweep CSV contains zero data rows")
    x_name = rows[0]["x_name"]
    x_values = sorted({float(r["x_value"]) for r in rows})
    d_values = sorted({float(r["d"]) for r in rows})
    x_pos = {x: i for i, x in enumerate(x_values)}
    d_pos = {d: i for i, d in enumerate(d_values)}
    mean = np.full((len(x_values), len(d_values)), np.nan)
    std = np.full_like(mean, np.nan)
    for r in rows:
        xi, di = x_pos[float(r["x_value"])], d_pos[float(r["d"])]
        mean[xi, di] = float(r["entropy_mean"])
        std[xi, di] = float(r["entropy_std"])
    return SweepGrid(
        x_name=x_name,
        x_values=np.array(x_values),
        d_values=np.array(d_values),
        entropy_mean=mean,
        entropy_std=std,
        replicates=int(rows[0]["replicates"]),
    )


def write_ensemble_csv(result: PerturbationEnsembleResult, path: str | Path) -> None:
    """CSV with per-step ensemble statistics of the four indicators."""
    header = [
        "step",
        "hamming_mean", "hamming_std",
        "energy_mean", "energy_std",
        "activity_mean", "activity_std",
        "entropy_mean", "entropy_std",
    ]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t in range(len(result.steps)):
            act_m = result.activity_mean[t]
            act_s = result.activity_std[t]
            writer.writerow([
                int(result.steps[t]),
                repr(float(result.hamming_mean[t])),
                repr(float(result.hamming_std[t])),
                repr(float(result.energy_mean[t])),
                repr(float(result.energy_std[t])),
                "" if np.isnan(act_m) else repr(float(act_m)),
                "" if np.isnan(act_s) else repr(float(act_s)),
                repr(float(result.entropy_mean[t])),
                repr(float(result.entropy_std[t])),
            ])
