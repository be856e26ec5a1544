#!/usr/bin/env python3
"""Single-neuron perturbation ensembles at the six crossover asymmetries.

One ensemble.csv per d value, each ready for
``besn-plot --kind ensemble-panels``.
"""

import argparse
import sys
from pathlib import Path

from besn.cli import main as besn_main

D_VALUES = (0.25, 0.184, 0.157, 0.144, 0.131, 0.105)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/perturbation")
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args()
    for d in D_VALUES:
        outdir = Path(args.out) / f"d_{d}"
        code = besn_main([
            "perturb", "--n", "1000", "--k", "22", "--d", str(d),
            "--copies", "50", "--bias", "0.6", "--t", "300",
            "--seed", str(args.seed), "--out", str(outdir),
        ])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
