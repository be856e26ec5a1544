#!/usr/bin/env python3
"""Driven-network sweeps over (signal gain, asymmetry) at fixed mean degree,
once with a shared white-noise drive and once with the three-sine drive."""

import argparse
import sys
from pathlib import Path

from besn.cli import main as besn_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/signal")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--replicates", type=int, default=8)
    ap.add_argument("--gains", default="0,0.5,1,2")
    ap.add_argument("--jobs", type=int, default=None)
    args = ap.parse_args()
    jobs = [] if args.jobs is None else ["--jobs", str(args.jobs)]
    for kind in ("white", "multisine"):
        code = besn_main([
            "sweep-signal", "--n", "1000", "--k", "150", "--signal", kind,
            "--gains", args.gains,
            "--d-min", "0", "--d-max", "0.2", "--d-steps", "21",
            "--t", "300", "--t0", "100", "--replicates", str(args.replicates),
            "--seed", str(args.seed), "--out", str(Path(args.out) / kind), *jobs,
        ])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
