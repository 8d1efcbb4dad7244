"""Sweep the bounded-confidence radius and count surviving opinion clusters.

The classic fragmentation picture: large radii pull one consensus, small
radii freeze many local clusters, and the transition sits near 1/(2c) for
c clusters on the unit interval.
"""

import argparse

import numpy as np

from odyn import cluster_count, hk_step


def settle(x, radius, max_steps=500, tol=1e-12):
    for step in range(max_steps):
        nxt = hk_step(x, radius)
        if float(np.max(np.abs(nxt - x))) <= tol:
            return nxt, step + 1
        x = nxt
    return x, max_steps


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--agents", type=int, default=100)
    parser.add_argument("--seed", type=int, default=2)
    parser.add_argument("--radii", type=float, nargs="+",
                        default=[0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.5])
    args = parser.parse_args()

    x0 = np.random.default_rng(args.seed).uniform(0.0, 1.0, args.agents)
    print(f"{'radius':>8} {'clusters':>9} {'steps':>6}  positions")
    for radius in args.radii:
        x, steps = settle(x0.copy(), radius)
        k = cluster_count(x, 1e-3)
        centers = np.unique(np.round(np.sort(x), 3))
        shown = ", ".join(f"{c:.3f}" for c in centers[:6])
        if centers.size > 6:
            shown += ", ..."
        print(f"{radius:>8.3f} {k:>9d} {steps:>6d}  [{shown}]")


if __name__ == "__main__":
    main()
