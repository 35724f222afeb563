#!/usr/bin/env python3
"""When a variance-chasing subspace works, and when it cannot.

Two ball mixtures with the same per-class shape. In the first, two
mirrored balls put all their spread along the center line, so the top
principal direction separates the labels perfectly. In the second, 2N
balls on the coordinate axes make the covariance a near multiple of the
identity: no direction stands out, and the top principal cut is blind.
A random projection planned from the class geometry has no such blind
spot; its budget depends only on widths and the failure probability.
"""

import numpy as np

from projsep import Ball, plan_multiclass
from projsep.pca import (
    inertia,
    principal_subspace,
    toy_cross_polytope_balls,
    toy_two_balls,
)


def main() -> None:
    n, radius = 10, 0.2
    direction = np.zeros(n)
    direction[0] = 1.0

    two = toy_two_balls(n, 4.0 * radius * direction, radius, samples=5000, seed=5)
    top = principal_subspace(inertia(two.features), 1).basis[:, 0]
    scores = two.features @ top
    pos, neg = scores[two.labels == 1], scores[two.labels == -1]
    separated = pos.min() > neg.max() or neg.min() > pos.max()
    print("two mirrored balls:")
    print(f"  top-direction alignment |cos| = {abs(top @ direction):.4f}")
    print(f"  1-D principal cut separates the labels: {separated}")
    print()

    cross = toy_cross_polytope_balls(n, radius, samples=5000, seed=6)
    eigs = np.linalg.eigvalsh(inertia(cross.features).sigma)
    print(f"{2 * n} balls on the coordinate axes:")
    print(f"  covariance eigenvalue spread max/min = {eigs.max() / eigs.min():.3f}")
    print("  every direction looks alike, so a principal cut keeps nothing")
    print()

    balls = []
    for axis_index in range(n):
        for sign in (1.0, -1.0):
            center = np.zeros(n)
            center[axis_index] = sign
            balls.append(Ball(center, radius).to_ellipsoid())
    plan = plan_multiclass(balls, p=0.1)
    print(f"planned random projection for the same {2 * n} classes:")
    print(f"  rows M = {plan.m} keep all {len(plan.pairs)} pairs disjoint"
          f" with failure budget 0.1")


if __name__ == "__main__":
    main()
