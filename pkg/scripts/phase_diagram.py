#!/usr/bin/env python3
"""Autonomous entropy phase diagram over (mean degree, asymmetry).

Writes sweep_phase.csv plus the resolved config sidecar; pair with
``besn-plot --kind heatmap`` to get the heatmap with the 1/(2 d^2) overlay.
"""

import argparse
import sys

from besn.cli import main as besn_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/phase_diagram")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--replicates", type=int, default=8)
    ap.add_argument("--jobs", type=int, default=None)
    args = ap.parse_args()
    argv = [
        "sweep-phase", "--n", "1000",
        "--k-min", "4", "--k-max", "300", "--k-steps", "20",
        "--d-min", "0.03", "--d-max", "0.4", "--d-steps", "20",
        "--t", "300", "--t0", "100",
        "--replicates", str(args.replicates),
        "--seed", str(args.seed), "--out", args.out,
    ]
    if args.jobs is not None:
        argv += ["--jobs", str(args.jobs)]
    return besn_main(argv)


if __name__ == "__main__":
    sys.exit(main())
