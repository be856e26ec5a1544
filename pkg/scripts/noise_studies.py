#!/usr/bin/env python3
"""Noise experiments: the fixed-degree (nu, d) sweep with its boundary fit,
and the (k, d) phase diagram at nu = 0.1."""

import argparse
import sys
from pathlib import Path

from besn.cli import main as besn_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/noise")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--replicates", type=int, default=8)
    ap.add_argument("--jobs", type=int, default=None)
    args = ap.parse_args()
    jobs = [] if args.jobs is None else ["--jobs", str(args.jobs)]

    code = besn_main([
        "sweep-noise", "--n", "1000", "--k", "200",
        "--nu-min", "0", "--nu-max", "0.3", "--nu-steps", "13",
        "--d-min", "0", "--d-max", "0.35", "--d-steps", "15",
        "--t", "300", "--t0", "100", "--replicates", str(args.replicates),
        "--seed", str(args.seed), "--out", str(Path(args.out) / "nu_vs_d"), *jobs,
    ])
    if code != 0:
        return code
    return besn_main([
        "sweep-noise-phase", "--n", "1000", "--nu", "0.1",
        "--k-min", "4", "--k-max", "300", "--k-steps", "20",
        "--d-min", "0.03", "--d-max", "0.4", "--d-steps", "20",
        "--t", "300", "--t0", "100", "--replicates", str(args.replicates),
        "--seed", str(args.seed), "--out", str(Path(args.out) / "noisy_phase"), *jobs,
    ])


if __name__ == "__main__":
    sys.exit(main())
