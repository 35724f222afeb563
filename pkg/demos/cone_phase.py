#!/usr/bin/env python3
"""Where a random projection stops preserving a circular cone.

For three half-angles this sweeps the projected dimension M, asks the
exact kernel test how often the projection's null space misses the cone,
and compares the 50% crossing against the closed-form curve
``N sin^2(alpha) + cos(2 alpha)``. The match is the whole story: the
transition is sharp and the curve pins its location.
"""

import numpy as np

from projsep import estimate_transition, run_cone_phase


def main() -> None:
    n, trials, seed = 100, 100, 7
    alphas = (np.pi / 8.0, np.pi / 4.0, 3.0 * np.pi / 8.0)
    grid = run_cone_phase(n, alphas, tuple(range(1, n + 1)), trials=trials, seed=seed)
    estimates = estimate_transition(grid, level=0.5)

    print(f"N = {n}, {trials} trials per cell, seed {seed}")
    print(f"{'half-angle':>10} {'curve':>8} {'50% crossing':>13} {'5%..95% band':>14}")
    for alpha, est in zip(alphas, estimates):
        curve = n * np.sin(alpha) ** 2 + np.cos(2.0 * alpha)
        band = f"{est.band[0]:.1f}..{est.band[1]:.1f}"
        print(f"{alpha:10.4f} {curve:8.2f} {est.m_cross:13.2f} {band:>14}")
    print()
    print("Wider cones need more rows; the crossing tracks the curve within")
    print("a dimension or two even at 100 trials.")


if __name__ == "__main__":
    main()
