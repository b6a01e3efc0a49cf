#!/usr/bin/env python3
"""Verify catalog entries against the oracle and write one JSON report per entry."""

import argparse
import time
from pathlib import Path

from cohomseries.catalog import DIAGNOSTIC_IDS, catalog_entry, diagnostic_entry
from cohomseries.series import Window
from cohomseries.verify import OracleCache, OracleOptions, verify_entry

DEFAULT_ENTRIES = [
    "hirzebruch:1", "hirzebruch:2", "hirzebruch:3", "bicubic", "h24-generic", "h24-tuned", "h35",
    "surf2e:3", "surf2e:4", "p1pn:(1,2,3)", "p1pn:(2,2,4)", "cicy7885", "cicy7643", "quadric4x",
    "cicy7644", "cicy7644:signed", "cicy7726", "cicy7726:signed",
]


def default_window(spec) -> Window:
    # [-8,8]^p for surfaces, hypersurfaces and the flop families, [-6,6]^p for the other complete intersections
    if spec.picard_rank == 4:
        return Window.cube(4, -4, 4)
    if spec.variety_id in ("cicy7885", "cicy7643"):
        return Window.cube(spec.picard_rank, -6, 6)
    return Window.cube(spec.picard_rank, -8, 8)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("entries", nargs="*", default=DEFAULT_ENTRIES)
    ap.add_argument("--out", default="reports")
    ap.add_argument("--seeds", type=int, default=2)
    ap.add_argument("--family-seeds", type=int, default=1)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    caches = {}
    for vid in args.entries:
        spec = diagnostic_entry(vid) if vid in DIAGNOSTIC_IDS else catalog_entry(vid)
        family = vid.split(":")[0] in ("cicy7644", "cicy7726")
        opts = OracleOptions(num_seeds=args.family_seeds if family else args.seeds)
        base = vid.split(":")[0] if family else vid
        oracle = caches.setdefault(base, OracleCache(spec, opts))
        t0 = time.time()
        rep = verify_entry(vid, default_window(spec), opts, spec=spec, oracle=oracle)
        (out / f"{vid.replace(':', '_').replace('(', '').replace(')', '').replace(',', '-')}.json").write_text(rep.to_json())
        print(f"{vid:18s} {rep.status:24s} mismatches {len(rep.mismatches):4d}  "
              f"indeterminate {len(rep.indeterminate):4d}/{rep.points}  {time.time() - t0:6.1f}s")


if __name__ == "__main__":
    main()
