"""Closed-form predictions for the order/chaos transition.

The annealed damage-spreading argument gives the autonomous chaos
condition 1 + 2p(1-p)<k> > <k>/2, which rearranges exactly to
<k> < k_c = 1/(2 d^2).  The noisy variant predicts a linear boundary
|d| < a*nu + b at fixed degree, equivalently <k> < a*theta/|d| for noise
of standard deviation theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "MeanFieldStats",
    "critical_degree",
    "critical_asymmetry",
    "chaos_condition",
    "mean_field_stats",
    "noisy_critical_degree",
    "noisy_boundary_d",
    "DEFAULT_NOISE_SLOPE",
]

# Empirical slope of the noisy boundary |d| < a*nu + b, as fitted from the
# fixed-degree noise sweep; exposed so callers can substitute their own fit.
DEFAULT_NOISE_SLOPE = 0.65


@dataclass(frozen=True)
class MeanFieldStats:
    """Moments of the summed input s to a neuron of degree k."""

    mean_input: float
    variance_input: float


def critical_degree(asymmetry: float) -> float:
    """k_c = 1/(2 d^2): the network is predicted chaotic iff <k> < k_c.

    d = 0 yields infinity (chaotic at every degree).
    """
    if asymmetry == 0.0:
        return math.inf
    return 1.0 / (2.0 * asymmetry * asymmetry)


def critical_asymmetry(mean_degree: float) -> float:
    """d_c = 1/sqrt(2 <k>), the inverse of ``critical_degree``."""
    if mean_degree <= 0:
        raise ValueError(f"mean_degree must be positive, got {mean_degree}")
    return 1.0 / math.sqrt(2.0 * mean_degree)


def chaos_condition(mean_degree: float, asymmetry: float) -> bool:
    """True iff 1 + 2p(1-p)<k> > <k>/2 with p = d + 1/2.

    Algebraically identical to <k> * 2 d^2 < 1 for every d.
    """
    p = asymmetry + 0.5
    return 1.0 + 2.0 * p * (1.0 - p) * mean_degree > mean_degree / 2.0


def mean_field_stats(degree: float, asymmetry: float) -> MeanFieldStats:
    """Mean 2kd and variance k(1 - 4d^2) of the summed input at degree k."""
    if degree < 0:
        raise ValueError(f"degree must be nonnegative, got {degree}")
    d = asymmetry
    return MeanFieldStats(
        mean_input=2.0 * degree * d,
        variance_input=degree * (1.0 - 4.0 * d * d),
    )


def noisy_critical_degree(
    noise_std: float, asymmetry: float, slope: float = DEFAULT_NOISE_SLOPE
) -> float:
    """k_c^noise = a*theta/|d| for Gaussian noise of standard deviation theta."""
    if asymmetry == 0.0:
        raise ValueError("asymmetry must be nonzero")
    if noise_std < 0:
        raise ValueError(f"noise_std must be nonnegative, got {noise_std}")
    if slope <= 0:
        raise ValueError(f"slope must be positive, got {slope}")
    return slope * noise_std / abs(asymmetry)


def noisy_boundary_d(noise_gain: float, slope: float, intercept: float) -> float:
    """Predicted boundary asymmetry a*nu + b for the fixed-degree noise sweep.

    The intercept comes from a boundary fit, never from a hardcoded value.
    """
    if noise_gain < 0:
        raise ValueError(f"noise_gain must be nonnegative, got {noise_gain}")
    return slope * noise_gain + intercept
