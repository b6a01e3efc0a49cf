#!/usr/bin/env python3
"""Text renderings of cohomology tables: h^i over a two-dimensional range of line bundles."""

import argparse

from cohomseries.series import parse_window
from cohomseries.verify import emit_figure

PRESETS = [
    ("hirzebruch:1", 0, "t1=-3..4,t2=-1..7"),
    ("hirzebruch:1", 1, "t1=-6..4,t2=-6..6"),
    ("bicubic", 0, "t1=-5..5,t2=-5..5"),
    ("bicubic", 1, "t1=-5..5,t2=-5..5"),
    ("h24-generic", 0, "t1=-4..4,t2=-2..6"),
    ("h24-tuned", 1, "t1=-6..2,t2=-2..6"),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--entry")
    ap.add_argument("--coh", type=int)
    ap.add_argument("--range")
    ap.add_argument("--format", choices=("grid", "csv"), default="grid")
    args = ap.parse_args()
    jobs = [(args.entry, args.coh, args.range)] if args.entry else PRESETS
    for vid, i, rng in jobs:
        print(f"# {vid}  h^{i}  {rng}")
        print(emit_figure(vid, i, parse_window(rng), args.format))


if __name__ == "__main__":
    main()
