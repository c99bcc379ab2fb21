"""Find one Williamson quadruple for each even order up to --max-order."""
import argparse
import time

from satcas import orchestrator as R
from satcas.config import SearchConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=16)
    ap.add_argument("--timeout", type=float, default=300.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = SearchConfig(max_solutions=1, timeout=args.timeout, seed=args.seed)
    for n in range(2, args.max_order + 1, 2):
        t = time.monotonic()
        rep = R.run("williamson", {"n": n}, cfg)
        sol = rep.solutions[0] if rep.solutions else None
        print(f"n={n:2d}  {rep.status:10s}  {time.monotonic() - t:8.2f}s  conflicts={rep.stats['conflicts']:6d}  {sol}",
              flush=True)


if __name__ == "__main__":
    main()
