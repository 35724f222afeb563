"""Escape-through-the-mesh probability bounds and dimension planners.

Given a width (or width bound) w for the sphere patch of a difference
cone, these functions say how many Gaussian projection rows keep the
random null space clear of the cone, hence keep projected bodies disjoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

from .bodies import Ball, Ellipsoid, difference_cone
from .widths import WidthBound, circular_width_sq, lambda_m, width_bound_ellipsoids


def escape_probability_lower(m: int, width: float) -> float:
    """Lower bound on the chance an m-row Gaussian null space misses the patch.

    ``1 - exp(-(lambda_m(m) - width)^2 / 2)`` when the width is below the
    expected norm ``lambda_m(m)``, else the vacuous bound 0.
    """
    width = float(width)
    if math.isnan(width) or width < 0.0:
        raise ValueError(f"width must be a nonnegative number, got {width!r}")
    lam = lambda_m(m)
    if width >= lam:
        return 0.0
    return 1.0 - math.exp(-0.5 * (lam - width) ** 2)


def required_dim_gordon(width: float, eta: float) -> int:
    """Smallest projected dimension with failure probability at most eta.

    Returns the least integer strictly greater than
    ``(width + sqrt(2 ln(1/eta)))^2 + 1``.
    """
    width = float(width)
    if math.isnan(width) or width < 0.0:
        raise ValueError(f"width must be a nonnegative number, got {width!r}")
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must lie in (0, 1), got {eta!r}")
    threshold = (width + math.sqrt(2.0 * math.log(1.0 / eta))) ** 2 + 1.0
    return int(math.floor(threshold)) + 1


class AkfBounds(NamedTuple):
    """Two-sided phase-transition bounds on the projected dimension."""

    m_success: int
    m_failure: int


def akf_bounds(width: float, n: int, eta: float) -> AkfBounds:
    """Success/failure dimensions from the conic phase-transition bounds.

    Disjointness holds with probability >= 1 - eta at ``m_success =
    ceil(w^2 + sqrt(16 n ln(4/eta)) + 1)`` and fails with probability
    >= 1 - eta at ``m_failure = floor(w^2 - sqrt(16 n ln(4/eta)))``
    (clamped at 0 when vacuous).
    """
    width = float(width)
    if math.isnan(width) or width < 0.0:
        raise ValueError(f"width must be a nonnegative number, got {width!r}")
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if not 0.0 < eta < 4.0:
        raise ValueError(f"eta must lie in (0, 4), got {eta!r}")
    margin = math.sqrt(16.0 * n * math.log(4.0 / eta))
    m_success = int(math.ceil(width**2 + margin + 1.0))
    m_failure = max(int(math.floor(width**2 - margin)), 0)
    return AkfBounds(m_success=m_success, m_failure=m_failure)


def required_dim_two_balls(n: int, ball1: Ball, ball2: Ball, eta: float) -> int:
    """Projection rows keeping two separated balls disjoint w.p. >= 1 - eta.

    Chains the exact circular difference cone, the squared-width curve in
    n dimensions, and the escape-theorem dimension requirement.
    """
    if ball1.ambient_dim != n or ball2.ambient_dim != n:
        raise ValueError("balls must live in the stated ambient dimension")
    cone = difference_cone(ball1, ball2)
    width = math.sqrt(circular_width_sq(n, cone.half_angle).value)
    return required_dim_gordon(width, eta)


@dataclass(frozen=True)
class PairPlan:
    """One unordered class pair inside a multiclass plan."""

    first: int
    second: int
    bound: WidthBound
    eta: float
    m_required: int | None

    def to_dict(self) -> dict:
        return {
            "first": self.first,
            "second": self.second,
            "bound": self.bound.to_dict(),
            "eta": self.eta,
            "m_required": self.m_required,
        }


@dataclass(frozen=True)
class MultiClassPlan:
    """Projection-dimension plan covering every class pair.

    The failure budget p is split evenly over the C(K,2) pairs; ``m`` is
    the max per-pair requirement, or None when some pair's width bound
    does not apply (``feasible`` False).
    """

    n_classes: int
    budget: float
    pairs: tuple[PairPlan, ...]
    m: int | None
    feasible: bool

    def to_dict(self) -> dict:
        return {
            "n_classes": self.n_classes,
            "budget": self.budget,
            "pairs": [pair.to_dict() for pair in self.pairs],
            "m": self.m,
            "feasible": self.feasible,
        }

    def render_table(self) -> str:
        rows = [("pair", "width", "eta", "M")]
        for pair in self.pairs:
            width = f"{pair.bound.value:.5f}" if pair.bound.valid else "invalid"
            m_text = str(pair.m_required) if pair.m_required is not None else "-"
            rows.append((f"{pair.first}-{pair.second}", width, f"{pair.eta:.6g}", m_text))
        cols = [max(len(row[i]) for row in rows) for i in range(4)]
        lines = ["  ".join(cell.ljust(cols[i]) for i, cell in enumerate(row)) for row in rows]
        summary = f"M = {self.m}" if self.feasible else "infeasible by bound"
        lines.append(summary)
        return "\n".join(lines)


def plan_multiclass(ellipsoids: list[Ellipsoid], p: float) -> MultiClassPlan:
    """Plan one projection dimension for pairwise-separated classes.

    Splits the failure budget as ``eta_ij = p / C(K,2)`` and takes the max
    of per-pair dimension requirements. Pairs whose width bound does not
    apply are kept in the table with ``m_required`` None and mark the plan
    infeasible.
    """
    k = len(ellipsoids)
    if k < 2:
        raise ValueError(f"need at least 2 classes, got {k}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"failure budget must lie in (0, 1), got {p!r}")
    n_pairs = k * (k - 1) // 2
    eta = p / n_pairs
    pairs = []
    for i, j in combinations(range(k), 2):
        try:
            bound = width_bound_ellipsoids(ellipsoids[i], ellipsoids[j])
        except ValueError as exc:
            bound = WidthBound(
                value=math.inf, kind="EllipsoidTheorem", valid=False, reason=str(exc)
            )
        m_required = required_dim_gordon(bound.value, eta) if bound.valid else None
        pairs.append(PairPlan(first=i, second=j, bound=bound, eta=eta, m_required=m_required))
    feasible = all(pair.m_required is not None for pair in pairs)
    m = max(pair.m_required for pair in pairs) if feasible else None
    return MultiClassPlan(
        n_classes=k, budget=p, pairs=tuple(pairs), m=m, feasible=feasible
    )
