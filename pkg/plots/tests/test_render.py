import json

import numpy as np
import pytest
from PIL import Image

from besn_plots.cli import main as cli_main
from besn_plots.render import PlotSpec, render

# golden image metadata: fixed figsize x dpi
HEATMAP_SIZE = (640, 480)
PANELS_SIZE = (640, 800)


def write_sweep_csv(path, x_name="mean_degree", nx=6, nd=8):
    xs = np.linspace(4, 120, nx)
    ds = np.linspace(0.03, 0.4, nd)
    lines = ["x_name,x_value,d,entropy_mean,entropy_std,replicates"]
    for x in xs:
        for d in ds:
            h = 1.0 if x < 1 / (2 * d * d) else 0.02
            lines.append(f"{x_name},{float(x)!r},{float(d)!r},{h!r},0.01,4")
    path.write_text("\n".join(lines) + "\n")
    return path


def write_ensemble_csv(path, steps=40):
    header = ("step,hamming_mean,hamming_std,energy_mean,energy_std,"
              "activity_mean,activity_std,entropy_mean,entropy_std")
    lines = [header]
    for t in range(steps + 1):
        ham = float(0.5 * (1 - np.exp(-t / 10)))
        act = "" if t == 0 else repr(float(0.3 + 0.01 * np.sin(t)))
        acs = "" if t == 0 else "0.02"
        lines.append(f"{t},{ham!r},0.01,{0.2!r},0.05,{act},{acs},{0.9!r},0.02")
    path.write_text("\n".join(lines) + "\n")
    return path


def test_heatmap_with_critical_overlay(tmp_path):
    csv_path = write_sweep_csv(tmp_path / "sweep.csv")
    before = csv_path.read_bytes()
    out = tmp_path / "heatmap.png"
    result = render(PlotSpec(input_csv=csv_path, kind="heatmap", output_path=out))
    assert out.exists()
    assert csv_path.read_bytes() == before  # input is read-only
    assert result.kind == "heatmap"
    assert result.n_rows == 6 * 8
    assert result.overlay_kind == "critical"
    pts = result.overlay_points
    assert pts is not None and len(pts) > 0
    # every plotted overlay point satisfies k * 2 d^2 = 1 to machine precision
    residual = np.abs(pts[:, 0] * 2.0 * pts[:, 1] ** 2 - 1.0)
    assert residual.max() <= 1e-12
    with Image.open(out) as img:
        assert img.format == "PNG"
        assert img.size == HEATMAP_SIZE


def test_heatmap_non_degree_axis_has_no_auto_overlay(tmp_path):
    csv_path = write_sweep_csv(tmp_path / "sweep.csv", x_name="noise_gain")
    out = tmp_path / "noise.png"
    result = render(PlotSpec(input_csv=csv_path, kind="heatmap", output_path=out))
    assert result.overlay_kind == "none"
    assert result.overlay_points is None
    assert out.exists()


def test_heatmap_fit_overlay(tmp_path):
    csv_path = write_sweep_csv(tmp_path / "sweep.csv", x_name="noise_gain")
    fit_path = tmp_path / "fit.json"
    fit_path.write_text(json.dumps({"slope": 0.65, "intercept": 0.05}))
    out = tmp_path / "fit.png"
    result = render(PlotSpec(input_csv=csv_path, kind="heatmap",
                             output_path=out, overlay="fit", fit_json=fit_path))
    pts = result.overlay_points
    assert np.allclose(pts[:, 1], 0.65 * pts[:, 0] + 0.05, atol=1e-12)


def test_heatmap_fit_overlay_from_config_sidecar(tmp_path):
    csv_path = write_sweep_csv(tmp_path / "sweep.csv", x_name="noise_gain")
    fit_path = tmp_path / "config.json"
    fit_path.write_text(json.dumps(
        {"command": "sweep-noise", "boundary_fit": {"slope": 0.7, "intercept": 0.02}}
    ))
    result = render(PlotSpec(input_csv=csv_path, kind="heatmap",
                             output_path=tmp_path / "fit2.png",
                             overlay="fit", fit_json=fit_path))
    pts = result.overlay_points
    assert np.allclose(pts[:, 1], 0.7 * pts[:, 0] + 0.02, atol=1e-12)


def test_ensemble_panels_layout(tmp_path):
    csv_path = write_ensemble_csv(tmp_path / "ensemble.csv")
    out = tmp_path / "panels.png"
    result = render(PlotSpec(input_csv=csv_path, kind="ensemble-panels",
                             output_path=out))
    assert result.panels == ("hamming", "energy", "activity", "entropy")
    assert result.n_rows == 41
    with Image.open(out) as img:
        assert img.format == "PNG"
        assert img.size == PANELS_SIZE


def test_empty_csv_rejected_with_row_count(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("x_name,x_value,d,entropy_mean,entropy_std,replicates\n")
    with pytest.raises(ValueError, match="zero data rows"):
        render(PlotSpec(input_csv=path, kind="heatmap", output_path=tmp_path / "x.png"))


def test_missing_column_named(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x_value,d\n1,0.1\n")
    with pytest.raises(ValueError, match="entropy_mean"):
        render(PlotSpec(input_csv=path, kind="heatmap", output_path=tmp_path / "x.png"))


def test_bad_kind_and_overlay_rejected(tmp_path):
    with pytest.raises(ValueError, match="figure kind"):
        PlotSpec(input_csv="x.csv", kind="scatter", output_path="y.png")
    with pytest.raises(ValueError, match="overlay"):
        PlotSpec(input_csv="x.csv", kind="heatmap", output_path="y.png",
                 overlay="rainbow")


def test_fit_overlay_requires_json(tmp_path):
    csv_path = write_sweep_csv(tmp_path / "sweep.csv")
    with pytest.raises(ValueError, match="fit JSON"):
        render(PlotSpec(input_csv=csv_path, kind="heatmap",
                        output_path=tmp_path / "x.png", overlay="fit"))


def test_cli_round_trip(tmp_path, capsys):
    csv_path = write_sweep_csv(tmp_path / "sweep.csv")
    out = tmp_path / "cli.png"
    code = cli_main(["--input", str(csv_path), "--kind", "heatmap",
                     "--output", str(out)])
    assert code == 0
    assert out.exists()
    assert "heatmap" in capsys.readouterr().out


def test_cli_error_exit_code(tmp_path, capsys):
    path = tmp_path / "empty.csv"
    path.write_text("x_name,x_value,d,entropy_mean,entropy_std,replicates\n")
    code = cli_main(["--input", str(path), "--kind", "heatmap",
                     "--output", str(tmp_path / "x.png")])
    assert code == 2
    assert "zero data rows" in capsys.readouterr().err
