#!/usr/bin/env python3
"""Benchmark simulated annealing against the exact solver on random
conflict-graph QUBOs; reports success rate and timing per size."""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from oracles import random_conflict_graph  # noqa: E402
from qimatch.qubo import mis_to_qubo  # noqa: E402
from qimatch.rng import Xorshift64Star  # noqa: E402
from qimatch.solvers import AnnealSchedule, solve_exact, solve_sa  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 15, 20])
    ap.add_argument("--density", type=float, default=0.3)
    ap.add_argument("--trials", type=int, default=25)
    ap.add_argument("--sweeps", type=int, default=1000)
    ap.add_argument("--restarts", type=int, default=16)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = Xorshift64Star(args.seed)
    print(f"{'n':>4} {'hits':>7} {'sa_ms':>8} {'exact_ms':>9}")
    for n in args.sizes:
        hits = 0
        sa_time = exact_time = 0.0
        for trial in range(args.trials):
            gc = random_conflict_graph(rng, n, args.density)
            q = mis_to_qubo(gc)
            t0 = time.perf_counter()
            exact = solve_exact(q)
            exact_time += time.perf_counter() - t0
            t0 = time.perf_counter()
            sa = solve_sa(
                q,
                AnnealSchedule(sweeps=args.sweeps, restarts=args.restarts, seed=trial),
            )
            sa_time += time.perf_counter() - t0
            if sa.best_energy == exact.best_energy:
                hits += 1
        print(
            f"{n:>4} {hits:>3}/{args.trials:<3} "
            f"{1000 * sa_time / args.trials:>8.1f} {1000 * exact_time / args.trials:>9.1f}"
        )


if __name__ == "__main__":
    main()
