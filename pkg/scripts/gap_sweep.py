#!/usr/bin/env python3
"""
Sweep the norm gap ||f||^2 - (1-|a|^4)(1+|a|^2)^2 over fixed points a.

Writes an hs-1 CSV (same columns as `hardycs sweep`) and prints how far the
series value strays from the closed form |a|^2 (2-|a|^2-|a|^4)(1+|a|^2)^2.

    python3 scripts/gap_sweep.py --moduli 0.05:0.95:0.05 --phases 4 --out gap.csv
"""
import argparse
import sys

import numpy as np

from hardycs import obstruction
from hardycs.errors import HardyError
from hardycs.report import SweepRow, rows_to_csv
from hardycs.verify import default_grid


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--moduli", default="0.05:0.95:0.05", help="lo:hi:step")
    p.add_argument("--phases", type=int, default=4)
    p.add_argument("--depth", type=int, default=256)
    p.add_argument("--max-depth", type=int, default=16384)
    p.add_argument("--out", help="CSV path (default: stdout summary only)")
    args = p.parse_args(argv)

    lo, hi, step = (float(x) for x in args.moduli.split(":"))
    moduli = np.round(np.arange(lo, hi + step / 2, step), 10)
    rows, worst = [], 0.0
    for a in default_grid(moduli, args.phases):
        try:
            r = obstruction.run(a, args.depth, max_depth=args.max_depth)
        except HardyError as e:
            rows.append(SweepRow(a, status=f"error:{type(e).__name__}"))
            continue
        rows.append(SweepRow.from_report(r))
        rel = abs(r.gap - obstruction.gap_closed(a)) / obstruction.gap_closed(a)
        worst = max(worst, rel)
        print(f"|a|={abs(a):.3f} arg={np.angle(a):+.3f} depth={r.working_depth:5d} gap={r.gap:.12f} rel.err={rel:.1e}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(rows_to_csv(rows))
    bad = [r for r in rows if r.gap is None or r.gap <= 0]
    print(f"{len(rows)} points, worst relative gap error {worst:.2e}, {len(bad)} without a positive gap")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
