"""Print the per-summand H^2 table for every catalog example in the regression grid.

    python3 scripts/catalog_table.py [--json out.json]
"""

import argparse
import json
import time

from twistvir.catalog import expected_h2, make_example, regression_grid
from twistvir.centralext import h2_summary


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--json", help="also write the rows here")
    args = ap.parse_args()
    rows = []
    t0 = time.perf_counter()
    for eid in regression_grid():
        t = h2_summary(make_example(eid))
        e = expected_h2(eid)
        rows.append({"example": eid.label(), "n_minus1": t.n_minus1, "n_zero": t.n_zero,
                     "n_one": t.n_one, "total": t.total, "expected": e.total,
                     "match": e.matches(t)})
    w = max(len(r["example"]) for r in rows)
    print(f"{'example':<{w}}  {'(-1) e/o':>9} {'(0) e/o':>8} {'(1) e/o':>8}  total  expected")
    for r in rows:
        fmt = lambda p: f"{p[0]}/{p[1]}"
        flag = "" if r["match"] else "  <-- mismatch"
        print(f"{r['example']:<{w}}  {fmt(r['n_minus1']):>9} {fmt(r['n_zero']):>8} "
              f"{fmt(r['n_one']):>8}  {r['total']:>5}  {r['expected']:>8}{flag}")
    print(f"{len(rows)} examples in {time.perf_counter() - t0:.2f}s, "
          f"{sum(not r['match'] for r in rows)} mismatches")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
