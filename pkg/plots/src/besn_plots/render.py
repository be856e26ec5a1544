"""Render besn CSV outputs as publication-style figures.

Two figure kinds:

* ``heatmap`` - an entropy heatmap from a sweep CSV (columns x_name,
  x_value, d, entropy_mean, entropy_std, replicates), asymmetry d on the
  vertical axis, color scale fixed to [0, 1].  When the x axis is the mean
  degree, the dashed overlay is the critical curve k = 1/(2 d^2); a fitted
  line d = a*x + b can be overlaid from a boundary-fit JSON instead.

* ``ensemble-panels`` - four stacked panels (Hamming distance, energy,
  activity, entropy) from a perturbation-ensemble CSV, ensemble mean as a
  solid line and mean +/- std as dashed lines.

Inputs are read only and never modified.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["PlotSpec", "RenderResult", "render"]

KINDS = ("heatmap", "ensemble-panels")
OVERLAYS = ("auto", "critical", "fit", "none")

PANELS = (
    ("hamming", "Hamming distance"),
    ("energy", "Energy"),
    ("activity", "Activity"),
    ("entropy", "Entropy"),
)

HEATMAP_FIGSIZE = (6.4, 4.8)
PANELS_FIGSIZE = (6.4, 8.0)
DPI = 100

_AXIS_LABELS = {
    "mean_degree": "mean degree",
    "noise_gain": "noise gain",
    "signal_gain": "signal gain",
}


@dataclass(frozen=True)
class PlotSpec:
    """What to render: input CSV, figure kind, output path, overlay choice."""

    input_csv: str | Path
    kind: str
    output_path: str | Path
    overlay: str = "auto"
    fit_json: str | Path | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if self.overlay not in OVERLAYS:
            raise ValueError(f"unknown overlay {self.overlay!r}; expected one of {OVERLAYS}")


@dataclass
class RenderResult:
    """What was drawn, for checking without reopening the image."""

    output_path: Path
    kind: str
    n_rows: int
    panels: tuple[str, ...] = ()
    overlay_kind: str = "none"
    overlay_points: np.ndarray | None = None  # (m, 2) columns (x, d)


def _read_csv(path: str | Path, required: set[str]) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = set(reader.fieldnames or ())
        missing = sorted(required - fields)
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: zero data rows")
    return rows


def _critical_curve(d_values: np.ndarray, x_lo: float, x_hi: float) -> np.ndarray:
    """Dashed-overlay samples of k = 1/(2 d^2), clipped to the x range.

    Every returned point satisfies k * 2 d^2 = 1 up to machine rounding.
    """
    d_min = max(float(d_values.min()), 1e-6)
    d_fine = np.linspace(d_min, float(d_values.max()), 400)
    k = 1.0 / (2.0 * d_fine * d_fine)
    keep = (k >= x_lo) & (k <= x_hi)
    return np.column_stack([k[keep], d_fine[keep]])


def _load_fit(path: str | Path) -> tuple[float, float]:
    obj = json.loads(Path(path).read_text())
    if "boundary_fit" in obj and isinstance(obj["boundary_fit"], dict):
        obj = obj["boundary_fit"]
    try:
        return float(obj["slope"]), float(obj["intercept"])
    except KeyError as exc:
        raise ValueError(f"{path}: fit JSON lacks key {exc}") from exc


def _render_heatmap(spec: PlotSpec) -> RenderResult:
    rows = _read_csv(
        spec.input_csv,
        {"x_name", "x_value", "d", "entropy_mean", "entropy_std", "replicates"},
    )
    x_name = rows[0]["x_name"]
    x_values = np.array(sorted({float(r["x_value"]) for r in rows}))
    d_values = np.array(sorted({float(r["d"]) for r in rows}))
    x_pos = {x: i for i, x in enumerate(x_values)}
    d_pos = {d: i for i, d in enumerate(d_values)}
    mean = np.full((len(d_values), len(x_values)), np.nan)
    for r in rows:
        mean[d_pos[float(r["d"])], x_pos[float(r["x_value"])]] = float(r["entropy_mean"])

    overlay_kind = spec.overlay
    if overlay_kind == "auto":
        if spec.fit_json is not None:
            overlay_kind = "fit"
        elif x_name == "mean_degree":
            overlay_kind = "critical"
        else:
            overlay_kind = "none"

    overlay_points = None
    if overlay_kind == "critical":
        overlay_points = _critical_curve(d_values, float(x_values.min()), float(x_values.max()))
    elif overlay_kind == "fit":
        if spec.fit_json is None:
            raise ValueError("overlay 'fit' requires a fit JSON path")
        slope, intercept = _load_fit(spec.fit_json)
        xs = np.linspace(float(x_values.min()), float(x_values.max()), 200)
        overlay_points = np.column_stack([xs, slope * xs + intercept])

    fig, ax = plt.subplots(figsize=HEATMAP_FIGSIZE, dpi=DPI)
    pc = ax.pcolormesh(x_values, d_values, mean, vmin=0.0, vmax=1.0,
                       shading="nearest", cmap="viridis")
    fig.colorbar(pc, ax=ax, label="mean entropy")
    if overlay_points is not None and len(overlay_points):
        ax.plot(overlay_points[:, 0], overlay_points[:, 1],
                "r--", linewidth=1.5, label="predicted boundary")
        ax.legend(loc="upper right", fontsize=8)
        ax.set_ylim(float(d_values.min()), float(d_values.max()))
    ax.set_xlabel(_AXIS_LABELS.get(x_name, x_name))
    ax.set_ylabel("asymmetry d")
    fig.tight_layout()
    fig.savefig(spec.output_path)
    plt.close(fig)
    return RenderResult(
        output_path=Path(spec.output_path),
        kind="heatmap",
        n_rows=len(rows),
        overlay_kind=overlay_kind,
        overlay_points=overlay_points,
    )


def _column(rows: list[dict], name: str) -> np.ndarray:
    return np.array(
        [float(r[name]) if r[name] not in ("", None) else np.nan for r in rows]
    )


def _render_panels(spec: PlotSpec) -> RenderResult:
    required = {"step"}
    for key, _ in PANELS:
        required |= {f"{key}_mean", f"{key}_std"}
    rows = _read_csv(spec.input_csv, required)
    steps = _column(rows, "step")

    fig, axes = plt.subplots(len(PANELS), 1, figsize=PANELS_FIGSIZE, dpi=DPI,
                             sharex=True)
    for ax, (key, label) in zip(axes, PANELS):
        mean = _column(rows, f"{key}_mean")
        std = _column(rows, f"{key}_std")
        ax.plot(steps, mean, "b-", linewidth=1.2, label="ensemble mean")
        ax.plot(steps, mean + std, "r--", linewidth=0.9, label="mean +/- std")
        ax.plot(steps, mean - std, "r--", linewidth=0.9)
        ax.set_ylabel(label)
        ax.grid(alpha=0.25)
    axes[0].legend(loc="upper right", fontsize=8)
    axes[-1].set_xlabel("time step")
    fig.tight_layout()
    fig.savefig(spec.output_path)
    plt.close(fig)
    return RenderResult(
        output_path=Path(spec.output_path),
        kind="ensemble-panels",
        n_rows=len(rows),
        panels=tuple(key for key, _ in PANELS),
    )


def render(spec: PlotSpec) -> RenderResult:
    """Render the figure described by ``spec`` and return what was drawn."""
    if spec.kind == "heatmap":
        return _render_heatmap(spec)
    if spec.kind == "ensemble-panels":
        return _render_panels(spec)
    raise ValueError(f"unknown figure kind {spec.kind!r}")  # pragma: no cover
