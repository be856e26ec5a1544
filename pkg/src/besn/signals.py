"""Scalar drive sequences u[n] broadcast to every neuron.

Three kinds: ``zero`` (autonomous), ``white_noise`` (one shared Gaussian
value per step, unlike the per-neuron noise of the noisy update rule) and
``multisine`` (normalized sum of sines at pairwise-incommensurable
frequencies).  Sampling is a pure function of (spec, n): the white-noise
generator is counter-based, so u[n] can be evaluated at any step index
independently and reproducibly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["SignalSpec", "DEFAULT_FREQUENCIES", "KINDS", "sample"]

# ~50-step base period; irrational ratios make the components incommensurable.
DEFAULT_FREQUENCIES: tuple[float, ...] = (0.02, 0.02 * math.sqrt(2.0), 0.02 * math.sqrt(3.0))

KINDS = ("zero", "white_noise", "multisine")


@dataclass(frozen=True)
class SignalSpec:
    """Description of the scalar drive.

    gain:          amplitude factor A (ignored by the zero kind)
    seed:          white-noise stream key (ignored otherwise)
    frequencies:   cycles/step for the multisine components
    normalization: divisor on the multisine sum; defaults to the number of
                   components so |u| <= A
    """

    kind: str = "zero"
    gain: float = 1.0
    seed: int = 0
    frequencies: tuple[float, ...] = field(default=DEFAULT_FREQUENCIES)
    normalization: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown signal kind {self.kind!r}; expected one of {KINDS}")
        if self.kind != "zero" and self.gain < 0:
            raise ValueError(f"gain must be nonnegative, got {self.gain}")
        if self.kind == "multisine":
            if len(self.frequencies) == 0:
                raise ValueError("multisine needs a nonempty frequency list")
            if self.normalization is not None and self.normalization <= 0:
                raise ValueError("normalization must be positive")

    @property
    def divisor(self) -> float:
        if self.normalization is not None:
            return self.normalization
        return float(len(self.frequencies))

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "gain": self.gain,
            "seed": self.seed,
            "frequencies": list(self.frequencies),
            "normalization": self.normalization,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SignalSpec":
        return cls(
            kind=obj["kind"],
            gain=float(obj.get("gain", 1.0)),
            seed=int(obj.get("seed", 0)),
            frequencies=tuple(obj.get("frequencies", DEFAULT_FREQUENCIES)),
            normalization=obj.get("normalization"),
        )


def sample(spec: SignalSpec, n: int) -> float:
    """Value of the drive at step index n >= 0."""
    if n < 0:
        raise ValueError(f"time index must be nonnegative, got {n}")
    if spec.kind == "zero":
        return 0.0
    if spec.kind == "white_noise":
        gen = np.random.Generator(np.random.Philox(key=spec.seed, counter=n))
        return spec.gain * float(gen.standard_normal())
    if spec.kind == "multisine":
        total = sum(math.sin(2.0 * math.pi * f * n) for f in spec.frequencies)
        return spec.gain * total / spec.divisor
    raise ValueError(f"unknown signal kind {spec.kind!r}")
