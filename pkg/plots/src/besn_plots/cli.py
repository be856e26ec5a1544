"""Command-line wrapper: besn-plot --input CSV --kind KIND --output IMAGE."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, OVERLAYS, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="besn-plot",
        description="Render besn sweep/ensemble CSVs as figures.",
    )
    ap.add_argument("--input", required=True, help="input CSV path")
    ap.add_argument("--kind", required=True, choices=KINDS)
    ap.add_argument("--output", required=True, help="output image path")
    ap.add_argument("--overlay", choices=OVERLAYS, default="auto",
                    help="boundary overlay for heatmaps (default auto)")
    ap.add_argument("--fit-json", default=None,
                    help="boundary-fit JSON for the 'fit' overlay")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(
        input_csv=args.input,
        kind=args.kind,
        output_path=args.output,
        overlay=args.overlay,
        fit_json=args.fit_json,
    )
    try:
        result = render(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {result.output_path} ({result.kind}, {result.n_rows} input rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
