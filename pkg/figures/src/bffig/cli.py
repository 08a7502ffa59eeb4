"""Command-line entry point for figure rendering.

Exit codes: 0 success, 2 schema violation, 3 I/O errors.
"""

from __future__ import annotations

import argparse
import sys

from .render import SchemaError, render_heatmap, render_raster


def _parse_neurons(spec: str):
    out = []
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        x, y = part.split(",")
        out.append((int(x), int(y)))
    return out


def cmd_heatmap(args) -> int:
    render_heatmap(args.heatmap, args.summary, args.out)
    print(f"heatmap image -> {args.out}")
    return 0


def cmd_raster(args) -> int:
    a, b = (float(x) for x in args.window.split(","))
    render_raster(args.points, _parse_neurons(args.neurons), (a, b), args.out)
    print(f"raster image -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bffig",
        description="Render images from simulation run CSV/JSON artifacts")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("heatmap", help="lattice heatmap of request counts")
    s.add_argument("--heatmap", required=True,
                   help="heatmap CSV (neuron_x,neuron_y,requests,simulated_time)")
    s.add_argument("--summary", required=True, help="run summary JSON")
    s.add_argument("--out", required=True, help="output image (PNG)")
    s.set_defaults(func=cmd_heatmap)

    s = sub.add_parser("raster", help="per-neuron point/segment raster")
    s.add_argument("--points", required=True,
                   help="raster CSV (kind,neuron_x,neuron_y,t0,t1,accepted)")
    s.add_argument("--neurons", required=True,
                   help="semicolon-separated x,y pairs, e.g. '0,0;1,0'")
    s.add_argument("--window", required=True, help="a,b")
    s.add_argument("--out", required=True, help="output image (PNG)")
    s.set_defaults(func=cmd_raster)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as e:
        print(f"schema violation: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as e:
        print(f"I/O or argument error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
