"""Existence certificates for zeros of residual maps.

Given F: R^n -> R^m, this package checks a two-condition certificate on a
closed ball (gradient domination of the least-squares functional plus a
residual bound at the center) that guarantees a zero of F inside the ball,
relaxes failing certificates by rescaling the dependent or independent
variables, and locates the certified zero by ball-constrained descent.
"""

from .certificate import (
    METHOD_CLOSED_FORM,
    METHOD_SAMPLED,
    Ball,
    Certificate,
    SamplingConfig,
    certify,
    domination_constant_sampled,
    quadratic_domination_constant,
    sample_ball,
)
from .descent import (
    DescentConfig,
    DescentResult,
    solve,
    verify_solution,
)
from .exceptions import (
    ConfigError,
    InputShapeError,
    InvalidConfigurationError,
    InvalidMethodError,
    InvalidParameterError,
    SingularRatioError,
    ZerocertError,
)
from .functional import (
    GradientCheckReport,
    check_gradient,
    grad_phi,
    phi,
    residual_norm,
)
from .problems import (
    QuadraticParams,
    ResidualProblem,
    bvp_forcing,
    eval_jacobian,
    eval_residual,
    finite_difference_jacobian,
    make_bvp,
    make_quadratic,
)
from .transforms import (
    DependentTransform,
    IndependentTransform,
    SweepPoint,
    TransformSearchResult,
    affine,
    apply_dependent,
    build_mu_grid,
    cubic_perturbation,
    dependent_condition_ratio,
    independent_condition_value,
    linear_scale,
    pull_back_zero,
    recover_problem_dependent,
    recover_problem_independent,
    scale,
    search_mu,
    transformed_certificate_quadratic,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "Certificate",
    "ConfigError",
    "DependentTransform",
    "DescentConfig",
    "DescentResult",
    "GradientCheckReport",
    "IndependentTransform",
    "InputShapeError",
    "InvalidConfigurationError",
    "InvalidMethodError",
    "InvalidParameterError",
    "METHOD_CLOSED_FORM",
    "METHOD_SAMPLED",
    "QuadraticParams",
    "ResidualProblem",
    "SamplingConfig",
    "SingularRatioError",
    "SweepPoint",
    "TransformSearchResult",
    "ZerocertError",
    "affine",
    "apply_dependent",
    "build_mu_grid",
    "bvp_forcing",
    "certify",
    "check_gradient",
    "cubic_perturbation",
    "dependent_condition_ratio",
    "domination_constant_sampled",
    "eval_jacobian",
    "eval_residual",
    "finite_difference_jacobian",
    "grad_phi",
    "independent_condition_value",
    "linear_scale",
    "make_bvp",
    "make_quadratic",
    "phi",
    "pull_back_zero",
    "quadratic_domination_constant",
    "recover_problem_dependent",
    "recover_problem_independent",
    "residual_norm",
    "sample_ball",
    "scale",
    "search_mu",
    "solve",
    "transformed_certificate_quadratic",
    "verify_solution",
]
