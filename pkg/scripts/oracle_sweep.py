"""Cross-check the closed-form H^2 against the brute-force window oracle.

For each grid example, solve the normalised cocycle system on windows N and
N+2 and compare the inner-window dimension with the closed-form total.

    python3 scripts/oracle_sweep.py [--names onedim fermion ...] [--window 6] [--inner 3]
"""

import argparse
import csv
import sys
import time

from twistvir.catalog import NAMES, make_example, regression_grid
from twistvir.centralext import h2_summary
from twistvir.config import OracleConfig
from twistvir.loopreal import oracle_h2


def main():
    cfg = OracleConfig()
    ap = argparse.ArgumentParser()
    ap.add_argument("--names", nargs="*", default=list(NAMES))
    ap.add_argument("--window", type=int, default=cfg.window)
    ap.add_argument("--inner", type=int, default=cfg.inner)
    ap.add_argument("--csv", help="write rows to this file")
    args = ap.parse_args()
    rows = []
    disagree = 0
    for eid in regression_grid(tuple(args.names)):
        g = make_example(eid)
        t0 = time.perf_counter()
        a = oracle_h2(g, args.window, args.inner)
        b = oracle_h2(g, args.window + 2, args.inner)
        th = h2_summary(g).total
        ok = a.projected_dim == b.projected_dim == th
        disagree += not ok
        rows.append([eid.label(), a.projected_dim, b.projected_dim, th, ok,
                     round(time.perf_counter() - t0, 2)])
        print(f"{eid.label():<36} N={args.window}:{a.projected_dim}  "
              f"N={args.window + 2}:{b.projected_dim}  theorem:{th}  "
              f"{'ok' if ok else 'DISAGREE'}", flush=True)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["example", "oracle_N", "oracle_N2", "theorem", "agree", "seconds"])
            w.writerows(rows)
    print(f"{len(rows)} examples, {disagree} disagreements")
    return 1 if disagree else 0


if __name__ == "__main__":
    sys.exit(main())
