"""Command-line entry: one PNG per input CSV.

    csvfig results.csv more.csv --outdir figs/

Options pass through to the figure builder; by default the x column, the
y columns, and any series grouping are inferred from the table itself.
"""

import argparse
import os
import sys

from .core import render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="csvfig",
        description="render log-scale line figures from sweep CSVs")
    parser.add_argument("inputs", nargs="+", help="CSV files to plot")
    parser.add_argument("--outdir", default=".",
                        help="directory for the PNG files (default: .)")
    parser.add_argument("--x", default=None, help="x column name")
    parser.add_argument("--y", default=None,
                        help="comma-separated y column names")
    parser.add_argument("--group-by", default=None, dest="group_by",
                        help="split series by this column's values")
    parser.add_argument("--linear", action="store_true",
                        help="linear y axis instead of log")
    parser.add_argument("--title", default=None, help="figure title")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    ys = args.y.split(",") if args.y else None
    try:
        os.makedirs(args.outdir, exist_ok=True)
    except OSError as exc:
        print("error: %s" % (exc,), file=sys.stderr)
        return 2
    failed = False
    for src in args.inputs:
        stem = os.path.splitext(os.path.basename(src))[0]
        out = os.path.join(args.outdir, stem + ".png")
        try:
            render(src, out, x=args.x, ys=ys, group_by=args.group_by,
                   logy=not args.linear, title=args.title)
        except (OSError, ValueError) as exc:
            print("error: %s: %s" % (src, exc), file=sys.stderr)
            failed = True
            continue
        print("wrote %s" % (out,), file=sys.stderr)
    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
