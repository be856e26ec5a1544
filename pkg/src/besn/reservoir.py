"""Random ternary-weight recurrent connection matrices.

A reservoir is a directed Erdos-Renyi graph on N neurons: every ordered
pair (i, j) independently carries a link with probability alpha = <k>/N,
and a created link has weight +1 with probability p = d + 1/2, else -1.
Row i of the weight matrix lists the incoming links of neuron i, so the
local field is computed as W @ x.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import sparse

__all__ = ["ReservoirParams", "Reservoir", "generate_reservoir"]

_MAX_SEED = 2**64


@dataclass(frozen=True)
class ReservoirParams:
    """Hyperparameters of a random binary-weight reservoir.

    n_neurons:   network size N
    mean_degree: expected incoming links per neuron, <k> = alpha * N
                 (continuously variable, 0 <= <k> <= N)
    asymmetry:   d = p - 1/2 in the open interval (-1/2, 1/2);
                 d > 0 means a majority of +1 weights
    seed:        64-bit unsigned seed; generation is fully deterministic
    """

    n_neurons: int
    mean_degree: float
    asymmetry: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_neurons < 1:
            raise ValueError(f"n_neurons must be a positive integer, got {self.n_neurons}")
        if not 0.0 <= self.mean_degree <= self.n_neurons:
            raise ValueError(
                f"mean_degree must lie in [0, n_neurons={self.n_neurons}], "
                f"got {self.mean_degree}"
            )
        if not -0.5 < self.asymmetry < 0.5:
            raise ValueError(f"asymmetry must lie in (-0.5, 0.5), got {self.asymmetry}")
        if not 0 <= self.seed < _MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def link_probability(self) -> float:
        """alpha = <k> / N."""
        return self.mean_degree / self.n_neurons

    @property
    def positive_probability(self) -> float:
        """p = d + 1/2, the probability that a created link has weight +1."""
        return self.asymmetry + 0.5


@dataclass(frozen=True, eq=False)
class Reservoir:
    """A realized weight matrix together with the parameters that produced it.

    ``weights`` is an int8 CSR matrix with entries in {-1, 0, +1}; row i
    holds the incoming links of neuron i.  Immutable after construction and
    safe to share across concurrent trajectory runs.
    """

    params: ReservoirParams
    weights: sparse.csr_matrix

    @property
    def n(self) -> int:
        return self.params.n_neurons

    def in_degrees(self) -> np.ndarray:
        """Number of incoming links per neuron (row-wise nonzero counts)."""
        return np.diff(self.weights.indptr)

    def links(self) -> list[tuple[int, int, int]]:
        """All links as (target i, source j, sign), in row-major order."""
        coo = self.weights.tocoo()
        return [
            (int(i), int(j), int(s))
            for i, j, s in zip(coo.row, coo.col, coo.data)
        ]

    def to_json_dict(self) -> dict:
        """Documented JSON form used for reproducibility audits."""
        return {
            "n_neurons": self.params.n_neurons,
            "mean_degree": self.params.mean_degree,
            "asymmetry": self.params.asymmetry,
            "seed": self.params.seed,
            "links": [list(t) for t in self.links()],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Reservoir":
        params = ReservoirParams(
            n_neurons=int(obj["n_neurons"]),
            mean_degree=float(obj["mean_degree"]),
            asymmetry=float(obj["asymmetry"]),
            seed=int(obj["seed"]),
        )
        links = obj["links"]
        return cls(params=params, weights=_links_to_csr(params.n_neurons, links))

    def save_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict()))

    @classmethod
    def load_json(cls, path: str | Path) -> "Reservoir":
        return cls.from_json_dict(json.loads(Path(path).read_text()))

    @classmethod
    def from_dense(
        cls,
        weights: np.ndarray,
        mean_degree: float | None = None,
        asymmetry: float = 0.0,
        seed: int = 0,
    ) -> "Reservoir":
        """Wrap an explicit weight matrix (mainly for tests and hand examples).

        ``mean_degree`` defaults to the realized mean in-degree; it is what
        the noisy update rule scales by.
        """
        dense = np.asarray(weights)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise ValueError(f"weights must be a square matrix, got shape {dense.shape}")
        if not np.isin(dense, (-1, 0, 1)).all():
            raise ValueError("weight entries must be in {-1, 0, +1}")
        n = dense.shape[0]
        if mean_degree is None:
            mean_degree = float(np.count_nonzero(dense)) / n
        params = ReservoirParams(n, mean_degree, asymmetry, seed)
        return cls(params=params, weights=sparse.csr_matrix(dense.astype(np.int8)))


def _links_to_csr(n: int, links) -> sparse.csr_matrix:
    if len(links) == 0:
        return sparse.csr_matrix((n, n), dtype=np.int8)
    arr = np.asarray(links, dtype=np.int64)
    rows, cols, signs = arr[:, 0], arr[:, 1], arr[:, 2]
    if rows.min() < 0 or rows.max() >= n or cols.min() < 0 or cols.max() >= n:
        raise ValueError("link index out of range")
    if not np.isin(signs, (-1, 1)).all():
        raise ValueError("link signs must be +1 or -1")
    return sparse.csr_matrix(
        (signs.astype(np.int8), (rows, cols)), shape=(n, n)
    )


def generate_reservoir(params: ReservoirParams) -> Reservoir:
    """Draw a reservoir from the directed Erdos-Renyi ensemble.

    Every ordered pair (i, j), including the diagonal, carries a link with
    probability alpha; created links are +1 with probability p = d + 1/2.
    Deterministic given ``params.seed``.
    """
    n = params.n_neurons
    rng = np.random.default_rng(params.seed)
    mask = rng.random((n, n)) < params.link_probability
    rows, cols = np.nonzero(mask)
    signs = np.where(
        rng.random(rows.size) < params.positive_probability, 1, -1
    ).astype(np.int8)
    weights = sparse.csr_matrix((signs, (rows, cols)), shape=(n, n))
    return Reservoir(params=params, weights=weights)
