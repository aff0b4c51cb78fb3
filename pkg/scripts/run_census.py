"""Run a census suite and write the per-instance reports to a JSON file.

    python scripts/run_census.py --suite battery --workers 4 --out census.json
"""

import argparse
import json
import sys

from pregeom.census import SUITES, run_suite


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--suite", default="battery", choices=sorted(SUITES))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    rows = run_suite(args.suite, args.workers)
    for r in rows:
        status = "ok " if r.ok else "BAD"
        print(f"{status} {r.id:<18} {r.seconds:7.2f}s  {'+'.join(r.verdict):<32} {r.case or '':<5} {r.line or ''}"
              + (f"  {r.error}" if r.error else ""))
    print(f"{sum(r.ok for r in rows)}/{len(rows)} as expected, {sum(r.seconds for r in rows):.1f}s total")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({r.id: r.report for r in rows}, fh, indent=1)
    return 0 if all(r.ok for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
