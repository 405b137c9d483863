#!/usr/bin/env python3
"""Exhaustive search on small cases, checked against the bound tables.

Runs the branch-and-bound search on each case, prints the certified maximum
next to the tabulated lower and best upper bound, and flags any disagreement.
The default case list finishes in a few seconds; (2,6,2) is the stretch case
behind --stretch and takes a few minutes of single-threaded search when the
node budget is left open.

Exit status is 1 if any search result contradicts the tables.
"""

import argparse
import sys
import time

from spreadlab.bounds import SpreadParams, best_known
from spreadlab.search import max_partial_spread

DEFAULT_CASES = "2,4,2 2,5,2 2,5,3 2,6,3 3,4,2"
STRETCH_CASES = "2,6,2"


def parse_cases(text):
    cases = []
    for chunk in text.split():
        q, n, t = (int(s) for s in chunk.split(","))
        cases.append(SpreadParams(q, n, t))
    return cases


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", default=DEFAULT_CASES,
                    help="space separated q,n,t triples")
    ap.add_argument("--stretch", action="store_true",
                    help=f"also run {STRETCH_CASES}")
    ap.add_argument("--budget", type=int, default=None, help="node budget")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)

    cases = parse_cases(args.cases)
    if args.stretch:
        cases += parse_cases(STRETCH_CASES)

    bad = 0
    print(f"{'case':>12} {'found':>6} {'status':>18} {'nodes':>10} "
          f"{'secs':>7} {'table':>12}")
    for params in cases:
        rep = best_known(params)
        t0 = time.perf_counter()
        res = max_partial_spread(
            params, max_nodes=args.budget, threads=args.threads
        )
        secs = time.perf_counter() - t0
        table = (f"= {rep.exact.value}" if rep.exact
                 else f"[{rep.lower}, {rep.best_upper}]")
        label = f"({params.q},{params.n},{params.t})"
        print(f"{label:>12} {res.best_size:>6} {res.status:>18} "
              f"{res.nodes_explored:>10} {secs:>7.2f} {table:>12}")

        ok = rep.lower <= res.best_size <= rep.best_upper
        if res.status == "EXACT" and rep.exact:
            ok = ok and res.best_size == rep.exact.value
        if not ok:
            print(f"  MISMATCH at {label}", file=sys.stderr)
            bad += 1

    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
