"""Trajectory indicators: entropy, energy, activity, Hamming distance.

Entropy uses the fraction rho of +1 neurons and base-2 logarithms, so it
ranges over [0, 1] with maximum 1 at rho = 1/2.  Activity is the
normalized Hamming distance between consecutive states; energy is the mean
of the +/-1 entries.  All operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import xlogy

if TYPE_CHECKING:  # pragma: no cover
    from .dynamics import Trajectory

__all__ = [
    "IndicatorSeries",
    "entropy",
    "mean_entropy",
    "energy",
    "hamming",
    "activity",
    "positive_fraction",
    "indicator_series",
]

_LN2 = np.log(2.0)


@dataclass(eq=False)
class IndicatorSeries:
    """Per-step indicator values for one trajectory.

    ``activity[0]`` is NaN (undefined before the first transition).
    ``hamming_to_reference`` is present only when a reference trajectory
    was supplied.
    """

    energy: np.ndarray
    activity: np.ndarray
    entropy: np.ndarray
    hamming_to_reference: np.ndarray | None = None

    def __post_init__(self) -> None:
        lengths = {len(self.energy), len(self.activity), len(self.entropy)}
        if self.hamming_to_reference is not None:
            lengths.add(len(self.hamming_to_reference))
        if len(lengths) != 1:
            raise ValueError("indicator series must all share the trajectory length")


def _rho(states: np.ndarray) -> np.ndarray:
    """Fraction of +1 entries along the last axis."""
    return np.count_nonzero(states == 1, axis=-1) / states.shape[-1]


def _binary_entropy(rho: np.ndarray) -> np.ndarray:
    """-rho*log2(rho) - (1-rho)*log2(1-rho), with 0*log(0) = 0."""
    rho = np.asarray(rho, dtype=np.float64)
    return -(xlogy(rho, rho) + xlogy(1.0 - rho, 1.0 - rho)) / _LN2


def positive_fraction(state: np.ndarray) -> float:
    """rho: the fraction of neurons whose value is +1."""
    return float(_rho(np.asarray(state)))


def entropy(state: np.ndarray) -> float:
    """Binary Shannon entropy of the +1 fraction, in [0, 1]."""
    return float(_binary_entropy(_rho(np.asarray(state))))


def energy(state: np.ndarray) -> float:
    """Mean of the +/-1 entries, in [-1, 1].  Satisfies E = 2*rho - 1."""
    state = np.asarray(state)
    return float(state.sum(dtype=np.int64) / state.shape[-1])


def hamming(a: np.ndarray, b: np.ndarray) -> float:
    """Fraction of positions where the two states differ, in [0, 1]."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"state lengths differ: {a.shape} vs {b.shape}")
    return float(np.count_nonzero(a != b) / a.shape[-1])


def activity(trajectory: "Trajectory", n: int) -> float:
    """Hamming distance between states n and n-1; defined for n >= 1."""
    if n < 1:
        raise ValueError(f"activity is undefined at step {n}; needs n >= 1")
    if n > trajectory.horizon:
        raise ValueError(f"step {n} beyond trajectory horizon {trajectory.horizon}")
    return hamming(trajectory.states[n], trajectory.states[n - 1])


def mean_entropy(trajectory: "Trajectory", t0: int, t_end: int | None = None) -> float:
    """Arithmetic mean of per-state entropy over steps t0..t_end inclusive.

    ``t_end`` defaults to the trajectory horizon.  The average is
    normalized by the actual number of summed terms.
    """
    last = trajectory.horizon
    if t_end is None:
        t_end = last
    if not 0 <= t0 < t_end <= last:
        raise ValueError(
            f"need 0 <= t0 < t_end <= {last}, got t0={t0}, t_end={t_end}"
        )
    window = trajectory.states[t0 : t_end + 1]
    return float(_binary_entropy(_rho(window)).mean())


def indicator_series(
    trajectory: "Trajectory", reference: "Trajectory | None" = None
) -> IndicatorSeries:
    """Energy, activity and entropy per step, plus optional reference Hamming."""
    states = trajectory.states
    n_steps, n = states.shape
    rho = _rho(states)
    ent = _binary_entropy(rho)
    eng = states.sum(axis=1, dtype=np.int64) / n
    act = np.empty(n_steps, dtype=np.float64)
    act[0] = np.nan
    act[1:] = np.count_nonzero(states[1:] != states[:-1], axis=1) / n
    ham = None
    if reference is not None:
        if reference.states.shape != states.shape:
            raise ValueError("reference trajectory shape does not match")
        ham = np.count_nonzero(states != reference.states, axis=1) / n
    return IndicatorSeries(energy=eng, activity=act, entropy=ent, hamming_to_reference=ham)
