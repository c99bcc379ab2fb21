"""Complex Golay pair counts (g_0 = 1) per length, with inequivalent classes."""
import argparse
import time

from satcas import orchestrator as R
from satcas.config import SearchConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-length", type=int, default=8)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    for n in range(1, args.max_length + 1):
        t = time.monotonic()
        rep = R.run("golay", {"n": n}, SearchConfig(workers=args.workers, timeout=None))
        print(f"n={n}  stage-1 f={rep.checked:6d}  pairs={len(rep.solutions):6d}  "
              f"classes={rep.inequivalent_count:4d}  {time.monotonic() - t:8.2f}s", flush=True)


if __name__ == "__main__":
    main()
