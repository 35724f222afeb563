"""Random-projection separability: when projected convex bodies stay disjoint.

The package decides disjointness of ellipsoids exactly (``separation``),
bounds the Gaussian widths that govern how many projection rows suffice
(``widths``, ``escape``), reproduces the phase-transition experiments
(``experiments``), and compares projections against PCA on inertia toys
and a classification pipeline (``pca``, ``classify``).
"""

__version__ = "0.1.0"

from .bodies import (
    Ball,
    CircularCone,
    Ellipsoid,
    GaussianProjection,
    difference_cone,
    fit_enclosing_ellipsoid,
    inscribed_ball,
    make_ellipsoid,
    project_body,
    support,
)
from .escape import (
    AkfBounds,
    MultiClassPlan,
    akf_bounds,
    escape_probability_lower,
    plan_multiclass,
    required_dim_gordon,
    required_dim_two_balls,
)
from .experiments import (
    PhaseGrid,
    TransitionEstimate,
    estimate_transition,
    load_phase_grid,
    run_cone_phase,
    run_ellipsoid_phase,
    sample_wishart_shape,
    save_phase_grid,
)
from .separation import (
    MinNormResult,
    NullspaceCheck,
    SeparationVerdict,
    decide_disjoint,
    decide_projected_batch,
    dual_cone_margin,
    min_norm_point,
    nullspace_avoids_cone,
)
from .widths import (
    PairGeometry,
    WidthBound,
    alpha_star,
    circular_width_sq,
    lambda_m,
    mc_expected_map_norm,
    mc_width_circular,
    mc_width_pseudoprojection,
    positive_part_expectation,
    width_bound_ellipsoids,
)

__all__ = [
    "Ball",
    "CircularCone",
    "Ellipsoid",
    "GaussianProjection",
    "difference_cone",
    "fit_enclosing_ellipsoid",
    "inscribed_ball",
    "make_ellipsoid",
    "project_body",
    "support",
    "AkfBounds",
    "MultiClassPlan",
    "akf_bounds",
    "escape_probability_lower",
    "plan_multiclass",
    "required_dim_gordon",
    "required_dim_two_balls",
    "PhaseGrid",
    "TransitionEstimate",
    "estimate_transition",
    "load_phase_grid",
    "run_cone_phase",
    "run_ellipsoid_phase",
    "sample_wishart_shape",
    "save_phase_grid",
    "MinNormResult",
    "NullspaceCheck",
    "SeparationVerdict",
    "decide_disjoint",
    "decide_projected_batch",
    "dual_cone_margin",
    "min_norm_point",
    "nullspace_avoids_cone",
    "PairGeometry",
    "WidthBound",
    "alpha_star",
    "circular_width_sq",
    "lambda_m",
    "mc_expected_map_norm",
    "mc_width_circular",
    "mc_width_pseudoprojection",
    "positive_part_expectation",
    "width_bound_ellipsoids",
    "__version__",
]
