"""Command-line entry point.

Every command resolves its full parameter set, writes a ``config.json``
sidecar next to its outputs (re-running that config reproduces the result
files byte for byte), prints a one-line summary, and exits nonzero with
the offending key named when a parameter is invalid.  ``--emit-config``
prints the resolved config without running anything.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import experiments, metrics, theory
from .dynamics import random_initial_state, run, write_states_csv, write_trajectory_csv
from .reservoir import Reservoir, ReservoirParams, generate_reservoir
from .signals import SignalSpec

COMMANDS = (
    "generate",
    "run",
    "perturb",
    "sweep-phase",
    "sweep-noise",
    "sweep-noise-phase",
    "sweep-signal",
    "fit-boundary",
)

_SIGNAL_KINDS = {"zero": "zero", "white": "white_noise", "multisine": "multisine"}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--out", type=str, default=".", help="output directory (default .)")
    p.add_argument("--config", type=str, default=None,
                   help="load parameters from a resolved-config JSON; explicit flags override")
    p.add_argument("--emit-config", action="store_true",
                   help="print the resolved config JSON and exit without running")


def _add_grid(p: argparse.ArgumentParser, axis: str, lo: float, hi: float, steps: int) -> None:
    p.add_argument(f"--{axis}-min", type=float, default=lo)
    p.add_argument(f"--{axis}-max", type=float, default=hi)
    p.add_argument(f"--{axis}-steps", type=int, default=steps)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="besn",
        description="Binary echo state network simulator: reservoirs, runs, "
                    "perturbation ensembles and entropy phase diagrams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a reservoir and write its JSON form")
    p.add_argument("--n", type=int, default=1000, help="number of neurons N")
    p.add_argument("--k", type=float, default=22.0, help="mean degree <k>")
    p.add_argument("--d", type=float, default=0.15, help="weight asymmetry d")
    _add_common(p)

    p = sub.add_parser("run", help="simulate one trajectory and write indicator CSV")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--k", type=float, default=22.0)
    p.add_argument("--d", type=float, default=0.15)
    p.add_argument("--t", type=int, default=300, help="horizon T")
    p.add_argument("--t0", type=int, default=100, help="burn-in for the summary entropy")
    p.add_argument("--nu", type=float, default=0.0, help="noise gain")
    p.add_argument("--signal", choices=sorted(_SIGNAL_KINDS), default="zero")
    p.add_argument("--gain", type=float, default=1.0, help="signal gain A")
    p.add_argument("--bias", type=float, default=0.5, help="initial +1 probability c")
    p.add_argument("--hold-at-zero", action="store_true",
                   help="zero local field keeps the previous value instead of +1")
    p.add_argument("--dump-states", action="store_true",
                   help="also write the raw -1/+1 states (small N only)")
    _add_common(p)

    p = sub.add_parser("perturb", help="single-neuron perturbation ensemble")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--k", type=float, default=22.0)
    p.add_argument("--d", type=float, default=0.15)
    p.add_argument("--t", type=int, default=300)
    p.add_argument("--copies", type=int, default=50, help="number of perturbed copies M")
    p.add_argument("--bias", type=float, default=0.6)
    _add_common(p)

    p = sub.add_parser("sweep-phase", help="autonomous (mean degree, asymmetry) entropy sweep")
    p.add_argument("--n", type=int, default=1000)
    _add_grid(p, "k", 2.0, 300.0, 20)
    _add_grid(p, "d", 0.0, 0.4, 20)
    _add_sweep_common(p)

    p = sub.add_parser("sweep-noise", help="fixed-degree (noise gain, asymmetry) sweep")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--k", type=float, default=200.0)
    _add_grid(p, "nu", 0.0, 0.3, 13)
    _add_grid(p, "d", 0.0, 0.35, 15)
    _add_sweep_common(p)

    p = sub.add_parser("sweep-noise-phase", help="(mean degree, asymmetry) sweep at fixed noise gain")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--nu", type=float, default=0.1)
    _add_grid(p, "k", 2.0, 300.0, 20)
    _add_grid(p, "d", 0.0, 0.4, 20)
    _add_sweep_common(p)

    p = sub.add_parser("sweep-signal", help="fixed-degree (signal gain, asymmetry) sweep")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--k", type=float, default=150.0)
    p.add_argument("--signal", choices=["white", "multisine"], default="white")
    p.add_argument("--gains", type=str, default=None,
                   help="comma-separated explicit gain values (overrides --gain-min/max/steps)")
    _add_grid(p, "gain", 0.0, 3.0, 7)
    _add_grid(p, "d", 0.0, 0.4, 20)
    _add_sweep_common(p)

    p = sub.add_parser("fit-boundary", help="fit the entropy-threshold boundary of a sweep CSV")
    p.add_argument("--input", type=str, required=False, default=None, help="sweep CSV path")
    p.add_argument("--threshold", type=float, default=0.5)
    _add_common(p)

    return parser


def _add_sweep_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t", type=int, default=300)
    p.add_argument("--t0", type=int, default=100)
    p.add_argument("--replicates", type=int, default=8)
    p.add_argument("--bias", type=float, default=0.6)
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default: available parallelism)")
    _add_common(p)


def _resolved_config(command: str, args: argparse.Namespace) -> dict:
    skip = {"command", "config", "emit_config", "out", "seed"}
    params = {k: v for k, v in vars(args).items() if k not in skip}
    return {
        "command": command,
        "master_seed": args.seed,
        "output_dir": args.out,
        "parameters": params,
    }


def _apply_config_file(args: argparse.Namespace, parser: argparse.ArgumentParser, argv) -> None:
    """Fill non-explicit arguments from a resolved-config JSON."""
    cfg = json.loads(Path(args.config).read_text())
    if cfg.get("command") != args.command:
        raise SystemExit(
            f"error: config file is for command {cfg.get('command')!r}, "
            f"not {args.command!r}"
        )
    explicit = _explicit_flags(argv)
    for key, value in cfg.get("parameters", {}).items():
        if key not in vars(args):
            continue
        if key not in explicit:
            setattr(args, key, value)
    if "seed" not in explicit and "master_seed" in cfg:
        args.seed = cfg["master_seed"]
    if "out" not in explicit and "output_dir" in cfg:
        args.out = cfg["output_dir"]


def _explicit_flags(argv) -> set[str]:
    flags = set()
    for tok in argv:
        if tok.startswith("--"):
            flags.add(tok[2:].split("=", 1)[0].replace("-", "_"))
    return flags


def _write_config(outdir: Path, config: dict) -> None:
    (outdir / "config.json").write_text(json.dumps(config, indent=2, sort_keys=True) + "\n")


def _theory_summary(k: float, d: float) -> str:
    kc = theory.critical_degree(d)
    verdict = "chaotic" if theory.chaos_condition(k, d) else "frozen"
    kc_text = "inf" if math.isinf(kc) else str(round(kc, 4))
    return f"theory: {verdict} (k_c = {kc_text})"


def _linspace(args: argparse.Namespace, axis: str) -> np.ndarray:
    lo = getattr(args, f"{axis}_min")
    hi = getattr(args, f"{axis}_max")
    steps = getattr(args, f"{axis}_steps")
    if steps < 1:
        raise ValueError(f"{axis}-steps must be >= 1, got {steps}")
    return np.linspace(lo, hi, steps)


def _cmd_generate(args) -> str:
    params = ReservoirParams(args.n, args.k, args.d, seed=args.seed)
    reservoir = generate_reservoir(params)
    out = Path(args.out)
    reservoir.save_json(out / "reservoir.json")
    nnz = reservoir.weights.nnz
    return (
        f"generate: wrote reservoir.json ({nnz} links, "
        f"mean in-degree {nnz / args.n:.2f}); {_theory_summary(args.k, args.d)}"
    )


def _cmd_run(args) -> str:
    params = ReservoirParams(args.n, args.k, args.d, seed=args.seed)
    reservoir = generate_reservoir(params)
    seq = np.random.SeedSequence(args.seed, spawn_key=(1,))
    init = random_initial_state(args.n, args.bias, rng=np.random.default_rng(seq))
    kind = _SIGNAL_KINDS[args.signal]
    signal = None
    if kind != "zero":
        signal = SignalSpec(kind=kind, gain=args.gain, seed=args.seed)
    noise_rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(2,)))
    traj = run(
        reservoir, init, signal=signal, noise_gain=args.nu,
        horizon=args.t, rng=noise_rng if args.nu > 0 else None,
        hold_at_zero=args.hold_at_zero,
    )
    out = Path(args.out)
    write_trajectory_csv(traj, out / "trajectory.csv")
    if args.dump_states:
        write_states_csv(traj, out / "trajectory_states.csv")
    hbar = metrics.mean_entropy(traj, args.t0) if args.t0 < args.t else float("nan")
    return (
        f"run: wrote trajectory.csv (T={args.t}, mean entropy {hbar:.4f} "
        f"over steps {args.t0}..{args.t}); {_theory_summary(args.k, args.d)}"
    )


def _cmd_perturb(args) -> str:
    result = experiments.run_perturbation_ensemble(
        n_neurons=args.n, mean_degree=args.k, asymmetry=args.d,
        positive_bias=args.bias, copies=args.copies, horizon=args.t,
        master_seed=args.seed,
    )
    out = Path(args.out)
    experiments.write_ensemble_csv(result, out / "ensemble.csv")
    return (
        f"perturb: wrote ensemble.csv (M={args.copies}, "
        f"late hamming {result.hamming_mean[-1]:.4f}); "
        f"{_theory_summary(args.k, args.d)}"
    )


def _sweep_summary(grid, fit_or_none) -> str:
    if fit_or_none is None:
        return "no boundary crossing found"
    return (
        f"boundary fit: d* = {fit_or_none.slope:.4f}*x + {fit_or_none.intercept:.4f} "
        f"(residual {fit_or_none.residual:.4f}, {len(fit_or_none.crossings)} crossings)"
    )


def _finish_sweep(grid, args, stem: str, config: dict) -> str:
    out = Path(args.out)
    experiments.write_sweep_csv(grid, out / f"{stem}.csv")
    try:
        fit = experiments.extract_boundary(grid)
    except ValueError:
        fit = None
    sidecar = dict(config)
    sidecar["boundary_fit"] = fit.to_json_dict() if fit is not None else None
    _write_config(out, sidecar)
    return f"{stem.replace('_', '-')}: wrote {stem}.csv; {_sweep_summary(grid, fit)}"


def _cmd_sweep_phase(args, config) -> str:
    grid = experiments.sweep_phase(
        _linspace(args, "k"), _linspace(args, "d"), n_neurons=args.n,
        horizon=args.t, burn_in=args.t0, replicates=args.replicates,
        master_seed=args.seed, positive_bias=args.bias, jobs=args.jobs,
    )
    return _finish_sweep(grid, args, "sweep_phase", config)


def _cmd_sweep_noise(args, config) -> str:
    grid = experiments.sweep_noise(
        args.k, _linspace(args, "nu"), _linspace(args, "d"), n_neurons=args.n,
        horizon=args.t, burn_in=args.t0, replicates=args.replicates,
        master_seed=args.seed, positive_bias=args.bias, jobs=args.jobs,
    )
    return _finish_sweep(grid, args, "sweep_noise", config)


def _cmd_sweep_noise_phase(args, config) -> str:
    grid = experiments.sweep_noise_phase(
        args.nu, _linspace(args, "k"), _linspace(args, "d"), n_neurons=args.n,
        horizon=args.t, burn_in=args.t0, replicates=args.replicates,
        master_seed=args.seed, positive_bias=args.bias, jobs=args.jobs,
    )
    return _finish_sweep(grid, args, "sweep_noise_phase", config)


def _cmd_sweep_signal(args, config) -> str:
    if args.gains is not None:
        gains = np.array([float(v) for v in args.gains.split(",")])
    else:
        gains = _linspace(args, "gain")
    kind = _SIGNAL_KINDS[args.signal]
    grid = experiments.sweep_signal(
        args.k, kind, gains, _linspace(args, "d"), n_neurons=args.n,
        horizon=args.t, burn_in=args.t0, replicates=args.replicates,
        master_seed=args.seed, positive_bias=args.bias, jobs=args.jobs,
    )
    return _finish_sweep(grid, args, "sweep_signal", config)


def _cmd_fit_boundary(args) -> str:
    if args.input is None:
        raise ValueError("fit-boundary requires --input (path to a sweep CSV)")
    grid = experiments.read_sweep_csv(args.input)
    fit = experiments.extract_boundary(grid, threshold=args.threshold)
    out = Path(args.out)
    (out / "boundary_fit.json").write_text(
        json.dumps(fit.to_json_dict(), indent=2, sort_keys=True) + "\n"
    )
    return (
        f"fit-boundary: wrote boundary_fit.json; slope a = {fit.slope:.4f}, "
        f"intercept b = {fit.intercept:.4f}, residual {fit.residual:.4f}"
    )


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        _apply_config_file(args, parser, argv)
    config = _resolved_config(args.command, args)
    if args.emit_config:
        print(json.dumps(config, indent=2, sort_keys=True))
        return 0

    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory {args.out!r}: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "generate":
            summary = _cmd_generate(args)
            _write_config(outdir, config)
        elif args.command == "run":
            summary = _cmd_run(args)
            _write_config(outdir, config)
        elif args.command == "perturb":
            summary = _cmd_perturb(args)
            _write_config(outdir, config)
        elif args.command == "sweep-phase":
            summary = _cmd_sweep_phase(args, config)
        elif args.command == "sweep-noise":
            summary = _cmd_sweep_noise(args, config)
        elif args.command == "sweep-noise-phase":
            summary = _cmd_sweep_noise_phase(args, config)
        elif args.command == "sweep-signal":
            summary = _cmd_sweep_signal(args, config)
        elif args.command == "fit-boundary":
            summary = _cmd_fit_boundary(args)
            _write_config(outdir, config)
        else:  # pragma: no cover
            raise ValueError(f"unknown command {args.command!r}")
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
