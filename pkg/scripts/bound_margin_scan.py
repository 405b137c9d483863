#!/usr/bin/env python3
"""Scan the improvement margin of the refined upper bound.

For each (q, r) pair and every t in the window max(2r, r+1) <= t <= theta_r,
the margin is main_bound - drake_freeman, which compare_bounds computes in
closed form.  The scan cross-checks the closed form against the two bounds
computed independently, locates the first t where the refinement wins
(margin < 0), and verifies the bracketing claims

    (q-1)*(t-1) <  floor(q^r/2)            => margin > 0
    (q-1)*(t-2) >  floor(q^r/2) + q        => margin < 0

which pin the sign change of the margin to a window of width about
q/(q-1) + 2 in t.

Exit status is 1 if any cross-check or bracketing claim fails.
"""

import argparse
import csv
import sys

from spreadlab.bounds import (
    SpreadParams,
    compare_bounds,
    drake_freeman,
    main_bound,
    theta,
)


def scan_pair(q, r):
    """Yield one row per t in the comparison window for this (q, r)."""
    t_lo = max(2 * r, r + 1)
    t_hi = theta(r, q)
    half = q**r // 2
    for t in range(t_lo, t_hi + 1):
        params = SpreadParams(q, 2 * t + r, t)
        margin = compare_bounds(params)
        direct = main_bound(params) - drake_freeman(params)
        assert margin == direct, (q, r, t, margin, direct)
        if (q - 1) * (t - 1) < half and not margin > 0:
            raise AssertionError(f"positive claim fails at q={q} r={r} t={t}")
        if (q - 1) * (t - 2) > half + q and not margin < 0:
            raise AssertionError(f"negative claim fails at q={q} r={r} t={t}")
        yield {"q": q, "r": r, "t": t, "margin": margin}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qs", default="2,3,4,5", help="comma separated q values")
    ap.add_argument("--rmax", type=int, default=4)
    ap.add_argument("--tcap", type=int, default=64,
                    help="skip windows extending past this t")
    ap.add_argument("--csv", action="store_true", help="emit the raw grid")
    args = ap.parse_args(argv)

    qs = [int(s) for s in args.qs.split(",") if s]
    rows = []
    for q in qs:
        for r in range(2, args.rmax + 1):
            if theta(r, q) > args.tcap:
                continue
            try:
                rows.extend(scan_pair(q, r))
            except AssertionError as exc:
                print(f"FAIL {exc}", file=sys.stderr)
                return 1

    if args.csv:
        w = csv.DictWriter(sys.stdout, fieldnames=["q", "r", "t", "margin"])
        w.writeheader()
        w.writerows(rows)
        return 0

    by_pair = {}
    for row in rows:
        by_pair.setdefault((row["q"], row["r"]), []).append(row)
    print(f"{'q':>3} {'r':>3} {'t window':>12} {'neg cells':>10} "
          f"{'first neg t':>12} {'min margin':>11} {'max margin':>11}")
    for (q, r), cells in sorted(by_pair.items()):
        ts = [c["t"] for c in cells]
        margins = [c["margin"] for c in cells]
        neg = [c["t"] for c in cells if c["margin"] < 0]
        first = neg[0] if neg else "-"
        print(f"{q:>3} {r:>3} {f'{ts[0]}..{ts[-1]}':>12} {len(neg):>10} "
              f"{first!s:>12} {min(margins):>11} {max(margins):>11}")
    print(f"\nchecked {len(rows)} cells, all cross-checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
