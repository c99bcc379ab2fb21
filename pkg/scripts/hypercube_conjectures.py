"""Ruskey-Savage and Norine checks across dimensions and orbit modes.

Prints how many CAS checks each configuration needed; smaller is better and
the verdict must not depend on the mode.
"""
import argparse
import time

from satcas import orchestrator as R
from satcas.config import SearchConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rs-dims", type=int, nargs="*", default=[2, 3, 4])
    ap.add_argument("--norine-dims", type=int, nargs="*", default=[2, 3, 4, 5])
    ap.add_argument("--modes", nargs="+", default=["none", "generators", "full"])
    args = ap.parse_args()
    jobs = [("ruskey-savage", d) for d in args.rs_dims] + [("norine", d) for d in args.norine_dims]
    for fam, d in jobs:
        for mode in args.modes:
            t = time.monotonic()
            rep = R.run(fam, {"d": d}, SearchConfig(orbit_mode=mode, timeout=None))
            print(f"{fam:14s} d={d}  orbits={mode:10s}  {rep.verdict:14s} checks={rep.checked:6d}  "
                  f"conflicts={rep.stats['conflicts']:7d}  {time.monotonic() - t:8.2f}s", flush=True)


if __name__ == "__main__":
    main()
