"""Long run: exhaust the Williamson search at order 35 (expected: no solutions).

Budget guide: tens of CPU hours in this pure-Python solver; use as many workers
as there are cores.  The report is written as JSON for later inspection.
"""
import argparse
import os
from pathlib import Path

from satcas import orchestrator as R
from satcas.config import SearchConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--order", type=int, default=35)
    ap.add_argument("--split-depth", type=int, default=10)
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--timeout", type=float, default=48 * 3600.0)
    ap.add_argument("--report", type=Path, default=Path("williamson35.json"))
    args = ap.parse_args()
    cfg = SearchConfig(split_depth=args.split_depth, workers=args.workers, timeout=args.timeout, prune=False)
    rep = R.run("williamson", {"n": args.order}, cfg)
    args.report.write_text(rep.to_json() + "\n")
    print(f"status={rep.status} verdict={rep.verdict} solutions={len(rep.solutions)} "
          f"wall={rep.timing['wall']:.0f}s cpu={rep.timing['cpu']:.0f}s")


if __name__ == "__main__":
    main()
