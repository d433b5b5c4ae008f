"""Command line: `plotkit plot --var x --proj 0,1,2 --stride 10 --out img.png FILE...`"""

from __future__ import annotations

import argparse
import sys

from .parser import SchemaError
from .render import VARIABLES, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plotkit",
                                     description="Render 3D projections of trajectory CSV files.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plot", help="render one image from one or more trajectory files")
    p.add_argument("files", nargs="+", metavar="FILE", help="trajectory CSV files")
    p.add_argument("--var", choices=VARIABLES, default="x",
                   help="which block to project (default: x)")
    p.add_argument("--proj", default="0,1,2", metavar="i,j,k",
                   help="three distinct coordinate indices (default: 0,1,2)")
    p.add_argument("--stride", type=int, default=1, help="keep every stride-th sample")
    p.add_argument("--out", required=True, metavar="IMG", help="output image path")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        proj = tuple(int(tok) for tok in args.proj.split(","))
    except ValueError:
        print(f"error: --proj expects three integers, got {args.proj!r}", file=sys.stderr)
        return 1
    try:
        spec = PlotSpec(inputs=tuple(args.files), output=args.out, variable=args.var,
                        projection=proj, stride=args.stride)
        path = render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
