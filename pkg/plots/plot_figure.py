#!/usr/bin/env python3
"""Render an epinet figure bundle to a vector image.

    plot_figure.py --bundle <dir> --out <file.svg> [--png]

Reads the bundle's manifest for panel layout, curve files and labels; exits
2 on unusable input, 0 on success.
"""

import argparse
import sys

from epinet_plots import RenderError, load_bundle, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bundle", required=True,
                        help="bundle directory (CSV files + manifest.json)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--png", action="store_true",
                        help="write PNG instead of SVG")
    args = parser.parse_args(argv)
    try:
        spec = load_bundle(args.bundle)
        out = render(spec, args.out, png=args.png)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
