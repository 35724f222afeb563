#!/usr/bin/env python3
"""Closed-form width bounds next to their Monte Carlo estimates.

Three views of the same quantity: the exact squared-width curve for the
difference cone of two balls, the Frobenius-ratio bound for general
ellipsoid pairs, and Monte Carlo estimates that should sit at or below
each bound. Ends with the norm envelope that powers the ellipsoid bound.
"""

import numpy as np

from projsep import (
    Ball,
    circular_width_sq,
    difference_cone,
    mc_expected_map_norm,
    mc_width_circular,
    mc_width_pseudoprojection,
    required_dim_gordon,
    width_bound_ellipsoids,
)


def ball_pair(n, zeta):
    c2 = np.zeros(n)
    c2[0] = zeta
    return Ball(np.zeros(n), 1.0), Ball(c2, 1.0)


def main() -> None:
    n, zeta = 100, 4.0
    b1, b2 = ball_pair(n, zeta)
    cone = difference_cone(b1, b2)
    curve = circular_width_sq(n, cone.half_angle)
    mc_cone = mc_width_circular(cone, trials=20_000, seed=1)
    print(f"two unit balls in R^{n}, centers {zeta:.0f} apart")
    print(f"  difference cone half-angle   {cone.half_angle:.4f} rad")
    print(f"  squared-width curve          {curve.value:.3f}")
    print(f"  Monte Carlo squared width    {mc_cone.value**2:.3f}"
          f" (std error of width {mc_cone.std_error:.4f})")

    bound = width_bound_ellipsoids(b1.to_ellipsoid(), b2.to_ellipsoid())
    mc_pseudo = mc_width_pseudoprojection(
        b1.to_ellipsoid(), b2.to_ellipsoid(), trials=20_000, seed=2
    )
    print(f"  ellipsoid-form width bound   {bound.value:.3f}")
    print(f"  Monte Carlo pseudo-width     {mc_pseudo.value:.3f}"
          f" +/- {mc_pseudo.std_error:.4f}")
    print(f"  rows for 99% separation      {required_dim_gordon(bound.value, 0.01)}"
          f" (vs {required_dim_gordon(np.sqrt(curve.value), 0.01)} from the curve)")
    print()

    rng = np.random.default_rng(3)
    matrix = rng.standard_normal((20, 20))
    est = mc_expected_map_norm(matrix, trials=100_000, seed=4)
    print("norm envelope for a random 20 x 20 map A, g standard normal:")
    print(f"  sqrt(2/pi) ||A||_F = {est.lower:.3f}")
    print(f"  E ||A g||          = {est.estimate:.3f} +/- {est.std_error:.4f}")
    print(f"  ||A||_F            = {est.upper:.3f}")
    print()
    print("The ellipsoid bound is looser than the exact ball curve; both are")
    print("honest upper envelopes for what the Monte Carlo runs measure.")


if __name__ == "__main__":
    main()
