"""Fraction of uniformly random symmetric +-1 rows rejected by the PSD filter."""
import argparse
import json
import random

from satcas import designs as D


def rejection_rate(n: int, trials: int, seed: int) -> float:
    rng = random.Random(seed)
    h = n // 2
    bad = 0
    for _ in range(trials):
        bits = [rng.choice((1, -1)) for _ in range(h + 1)]
        bad += not D.psd_filter([bits[min(j, n - j)] for j in range(n)]).passed
    return bad / trials


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--orders", type=int, nargs="+", default=[5, 11, 21, 35, 51, 69])
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = [{"n": n, "trials": args.trials, "rejected": rejection_rate(n, args.trials, args.seed)}
            for n in args.orders]
    if args.json:
        print(json.dumps(rows, indent=1))
    else:
        for r in rows:
            print(f"n={r['n']:3d}  rejected {r['rejected']:.2%} of {r['trials']}")


if __name__ == "__main__":
    main()
