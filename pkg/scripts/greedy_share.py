"""How often the greedy max-cover step settles the lower bound, per family and
budget, on random instances.  Prints one row per (family, size) bucket."""

import argparse
from collections import defaultdict

from ixs.adapters.bcp import BcpAdapter, gen_bcp
from ixs.adapters.bkp import BkpAdapter, gen_bkp
from ixs.adapters.msmp import MsmpAdapter, build_msmp, gen_watts_strogatz
from ixs.core import run_ixs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=10)
    args = ap.parse_args()

    buckets = defaultdict(list)
    for seed in range(args.reps):
        for n in (8, 10, 12):
            res = run_ixs(BkpAdapter(gen_bkp(n, n // 2, seed)))
            buckets["bkp", n].append((res.greedy_fraction, res.iterations))
        for n in (6, 8, 10):
            res = run_ixs(BcpAdapter(gen_bcp(n, 0.7, seed)))
            buckets["bcp", n].append((res.greedy_fraction, res.iterations))
        for n in (8, 12, 16):
            inst = build_msmp(gen_watts_strogatz(n, 4, 0.3, seed), 2, 2, 5, seed)
            res = run_ixs(MsmpAdapter(inst))
            buckets["msmp", n].append((res.greedy_fraction, res.iterations))

    print(f"{'family':6s} {'n':>3s} {'greedy':>7s} {'iters':>7s}")
    for (family, n), runs in sorted(buckets.items()):
        share = sum(f for f, _ in runs) / len(runs)
        iters = sum(i for _, i in runs) / len(runs)
        print(f"{family:6s} {n:3d} {share:7.3f} {iters:7.1f}")


if __name__ == "__main__":
    main()
