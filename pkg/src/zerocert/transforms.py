"""Variable transforms that relax failing certificates.

Two invertible transform families rewrite F(u) = 0 in equivalent forms:

- dependent transforms A act on the codomain with A(0) = 0, giving A o F;
  zeros are preserved in both directions because A is invertible and fixes 0.
- independent transforms B reparameterize the domain; writing F = G o B, the
  recovered problem G = F o B^-1 has zeros exactly at B-images of F's zeros,
  so a zero v* of G pulls back to the zero B^-1(v*) of F.

The certificate conditions change under either rewrite, and the transform
parameter is a knob: sweeping it can turn a failing certificate into a
passing one.  :func:`search_mu` performs that sweep for the scaling family
B(v) = mu*v.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .certificate import (
    METHOD_CLOSED_FORM,
    METHOD_SAMPLED,
    Ball,
    Certificate,
    SamplingConfig,
    certify,
    quadratic_domination_constant,
)
from .exceptions import (
    InputShapeError,
    InvalidConfigurationError,
    InvalidParameterError,
    SingularRatioError,
    ZerocertError,
)
from .problems import ResidualProblem, eval_jacobian

CUBIC_INVERSE_TOL = 1e-14
ZERO_EXCLUSION_FRACTION = 1e-3  # half-width of the mu-grid hole around 0, relative


@dataclass(frozen=True)
class DependentTransform:
    """Invertible codomain map A with A(0) = 0, applied componentwise.

    ``forward``, ``derivative`` and ``inverse`` accept scalars or arrays and
    operate elementwise.
    """

    family: str
    params: dict = field(default_factory=dict)
    forward: Callable = None
    derivative: Callable = None
    inverse: Callable = None


@dataclass(frozen=True)
class IndependentTransform:
    """Invertible domain map B applied componentwise.

    Both built-in families have constant nonzero derivative, so bijectivity
    holds by construction.
    """

    family: str
    params: dict = field(default_factory=dict)
    forward: Callable = None
    derivative: Callable = None
    inverse: Callable = None


def linear_scale(alpha: float) -> DependentTransform:
    """Dependent transform A(y) = alpha*y, alpha != 0."""
    alpha = float(alpha)
    if alpha == 0.0:
        raise InvalidParameterError("linear_scale needs alpha != 0")
    return DependentTransform(
        family="linear_scale",
        params={"alpha": alpha},
        forward=lambda y: alpha * np.asarray(y, dtype=float),
        derivative=lambda y: np.full_like(np.asarray(y, dtype=float), alpha),
        inverse=lambda y: np.asarray(y, dtype=float) / alpha,
    )


def _cubic_inverse(w, beta: float) -> np.ndarray:
    """Solve y + beta*y**3 = w elementwise by safeguarded Newton.

    The map is odd and strictly increasing for beta >= 0, so the root is
    bracketed by [0, w]; Newton steps leaving the bracket fall back to
    bisection.  Converges to |A(y) - w| <= 1e-14*(1 + |w|).
    """
    w = np.asarray(w, dtype=float)
    if beta == 0.0:
        return w.copy()
    lo = np.minimum(w, 0.0)
    hi = np.maximum(w, 0.0)
    y = w / (1.0 + beta * w * w)
    for _ in range(200):
        f = y + beta * y**3 - w
        if np.all(np.abs(f) <= CUBIC_INVERSE_TOL * (1.0 + np.abs(w))):
            break
        lo = np.where(f < 0.0, y, lo)
        hi = np.where(f > 0.0, y, hi)
        step = f / (1.0 + 3.0 * beta * y * y)
        y_new = y - step
        outside = (y_new < lo) | (y_new > hi)
        y = np.where(outside, 0.5 * (lo + hi), y_new)
    return y


def cubic_perturbation(beta: float) -> DependentTransform:
    """Dependent transform A(y) = y + beta*y**3, beta >= 0.

    Restricting beta >= 0 keeps A'(y) = 1 + 3*beta*y**2 > 0 everywhere, so A
    is globally invertible; the inverse is computed numerically.
    """
    beta = float(beta)
    if beta < 0.0:
        raise InvalidParameterError("cubic_perturbation needs beta >= 0")
    return DependentTransform(
        family="cubic_perturbation",
        params={"beta": beta},
        forward=lambda y: np.asarray(y, dtype=float) + beta * np.asarray(y, dtype=float) ** 3,
        derivative=lambda y: 1.0 + 3.0 * beta * np.asarray(y, dtype=float) ** 2,
        inverse=lambda y: _cubic_inverse(y, beta),
    )


def scale(mu: float) -> IndependentTransform:
    """Independent transform B(v) = mu*v, mu != 0."""
    mu = float(mu)
    if mu == 0.0:
        raise InvalidParameterError("scale needs mu != 0")
    return IndependentTransform(
        family="scale",
        params={"mu": mu},
        forward=lambda v: mu * np.asarray(v, dtype=float),
        derivative=lambda v: np.full_like(np.asarray(v, dtype=float), mu),
        inverse=lambda v: np.asarray(v, dtype=float) / mu,
    )


def affine(mu: float, shift: float) -> IndependentTransform:
    """Independent transform B(v) = mu*v + shift, mu != 0."""
    mu = float(mu)
    shift = float(shift)
    if mu == 0.0:
        raise InvalidParameterError("affine needs mu != 0")
    return IndependentTransform(
        family="affine",
        params={"mu": mu, "shift": shift},
        forward=lambda v: mu * np.asarray(v, dtype=float) + shift,
        derivative=lambda v: np.full_like(np.asarray(v, dtype=float), mu),
        inverse=lambda v: (np.asarray(v, dtype=float) - shift) / mu,
    )


def apply_dependent(transform: DependentTransform, problem: ResidualProblem) -> ResidualProblem:
    """Compose on the codomain: the problem v -> A(F(v)).

    Zeros are preserved in both directions (A(0) = 0 and A invertible).  The
    Jacobian picks up the row scaling A'(F(v)).
    """

    def residual(v: np.ndarray) -> np.ndarray:
        return np.asarray(transform.forward(problem.residual(v)), dtype=float)

    def jacobian(v: np.ndarray) -> np.ndarray:
        f = np.asarray(problem.residual(v), dtype=float)
        scale_rows = np.asarray(transform.derivative(f), dtype=float)
        return scale_rows[:, None] * eval_jacobian(problem, v)

    return ResidualProblem(
        name=f"{transform.family}({problem.name})",
        n=problem.n,
        m=problem.m,
        residual=residual,
        jacobian=jacobian,
        weights=problem.weights,
    )


def recover_problem_dependent(transform: DependentTransform, problem_f: ResidualProblem) -> ResidualProblem:
    """Peel a dependent transform off F: the problem G with F = A o G.

    G(v) = A^-1(F(v)); its zeros coincide with F's.
    """

    def residual(v: np.ndarray) -> np.ndarray:
        return np.asarray(transform.inverse(problem_f.residual(v)), dtype=float)

    def jacobian(v: np.ndarray) -> np.ndarray:
        g = residual(v)
        scale_rows = 1.0 / np.asarray(transform.derivative(g), dtype=float)
        return scale_rows[:, None] * eval_jacobian(problem_f, v)

    return ResidualProblem(
        name=f"{transform.family}^-1({problem_f.name})",
        n=problem_f.n,
        m=problem_f.m,
        residual=residual,
        jacobian=jacobian,
        weights=problem_f.weights,
    )


def recover_problem_independent(transform: IndependentTransform, problem_f: ResidualProblem) -> ResidualProblem:
    """Peel an independent transform off F: the problem G with F = G o B.

    G(v) = F(B^-1(v)), evaluated literally as that composition so that
    F(pull_back_zero(B, v*)) and G(v*) are the same computation, value for
    value.  When F is the quadratic family and B is a pure scaling, G is the
    quadratic with coefficient lambda/mu^2 and is tagged as such, keeping the
    closed-form certificate available.
    """

    def residual(v: np.ndarray) -> np.ndarray:
        return np.asarray(problem_f.residual(np.asarray(transform.inverse(v), dtype=float)), dtype=float)

    def jacobian(v: np.ndarray) -> np.ndarray:
        w = np.asarray(transform.inverse(v), dtype=float)
        inv_deriv = 1.0 / np.asarray(transform.derivative(w), dtype=float)
        return eval_jacobian(problem_f, w) * inv_deriv[None, :]

    if problem_f.is_quadratic and transform.family == "scale":
        mu = transform.params["mu"]
        name = "quadratic"
        params = {"lambda": problem_f.params["lambda"] / mu**2}
    else:
        name = f"{problem_f.name}o{transform.family}^-1"
        params = {}
    return ResidualProblem(
        name=name,
        n=problem_f.n,
        m=problem_f.m,
        residual=residual,
        jacobian=jacobian,
        weights=problem_f.weights,
        params=params,
    )


def pull_back_zero(transform: IndependentTransform, v_star) -> np.ndarray:
    """Map a zero v* of G = F o B^-1 back to the zero B^-1(v*) of F.

    Since F = G o B as computations, ||F(pull_back_zero(B, v*))|| equals
    ||G(v*)|| exactly as a value, not just up to tolerance.
    """
    return np.atleast_1d(np.asarray(transform.inverse(np.asarray(v_star, dtype=float)), dtype=float))


def dependent_condition_ratio(transform: DependentTransform, g: float) -> float:
    """Relaxation ratio |A(g) / (g * A'(g))| for a dependent transform.

    A lower bound c_G/c on this ratio over the ball transfers a domination
    constant c for A o G to the constant c_G for G.  Identically 1 for
    linear scalings, which is why they never enlarge the constant.
    """
    g = float(g)
    if g == 0.0:
        raise SingularRatioError("ratio undefined at g = 0")
    d = float(np.asarray(transform.derivative(g)))
    if d == 0.0:
        raise SingularRatioError("ratio undefined where A'(g) = 0")
    a = float(np.asarray(transform.forward(g)))
    return abs(a / (g * d))


def independent_condition_value(transform: IndependentTransform, v: float) -> float:
    """Relaxation value (B^-1)'(B(v)) = 1/B'(v) for an independent transform.

    A lower bound c_G/c on this value over the ball transfers a domination
    constant c for G o B to the constant c_G for G; for the built-in families
    it is the constant 1/mu.
    """
    d = float(np.asarray(transform.derivative(float(v))))
    if d == 0.0:
        raise SingularRatioError("value undefined where B'(v) = 0")
    return 1.0 / d


def transformed_certificate_quadratic(lam: float, mu: float, x: float, r: float) -> Certificate:
    """Closed-form certificate for the mu-rescaled quadratic problem.

    Rescaling the domain by B(v) = mu*v turns F(u) = lam*u**2 - 1 into
    G(v) = (lam/mu**2)*v**2 - 1, whose certificate on B_r(x) has the same
    closed form with coefficient lam/mu**2.  Both sides of that comparison
    are reported multiplied by mu**2 (lhs = |lam*x**2 - mu**2|, rhs = r times
    the original problem's constant), which leaves the verdict unchanged,
    reduces to the plain certificate at mu = 1, and makes slacks comparable
    across mu.  The rescaled-problem form is evaluated as well and the two
    verdicts are required to agree.
    """
    mu = float(mu)
    if mu == 0.0:
        raise InvalidParameterError("mu must be nonzero")
    lam = float(lam)
    x = float(x)
    r = float(r)

    lam_g = lam / mu**2
    c_g = quadratic_domination_constant(lam_g, x, r)
    passed_g = abs(lam_g * x * x - 1.0) <= r * c_g

    c = quadratic_domination_constant(lam, x, r)
    lhs = abs(lam * x * x - mu * mu)
    rhs = r * c
    passed = lhs <= rhs
    if passed != passed_g:
        raise ZerocertError(
            "equivalent certificate forms disagreed "
            f"(lam={lam}, mu={mu}, x={x}, r={r})"
        )
    return Certificate(
        ball=Ball(np.array([x]), r),
        c=c,
        lhs=lhs,
        rhs=rhs,
        slack=rhs - lhs,
        passed=passed,
        method=METHOD_CLOSED_FORM,
        sample_count=0,
    )


@dataclass(frozen=True)
class SweepPoint:
    """One entry of a transform-parameter sweep."""

    mu: float
    c: float
    lhs: float
    rhs: float
    slack: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "c": self.c,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class TransformSearchResult:
    """Outcome of a parameter sweep over the scaling transform.

    ``certificate`` is the certificate at ``best_parameter``; when any entry
    passed, the best entry is passing (maximum slack, ties broken by least
    distortion |mu - 1|, then by smaller mu).
    """

    best_parameter: float
    certificate: Certificate
    sweep: list[SweepPoint]
    any_passed: bool
    zero_exclusion: float | None = None

    def to_dict(self) -> dict:
        return {
            "best_parameter": self.best_parameter,
            "any_passed": self.any_passed,
            "zero_exclusion": self.zero_exclusion,
            "certificate": self.certificate.to_dict(),
            "sweep": [p.to_dict() for p in self.sweep],
        }


def _branch_grid(lo: float, hi: float, count: int, spacing: str) -> np.ndarray:
    if count <= 0:
        return np.empty(0)
    if spacing == "geometric":
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)


def build_mu_grid(
    mu_range: tuple[float, float],
    grid_size: int,
    spacing: str = "linear",
) -> tuple[np.ndarray, float | None]:
    """Parameter grid over mu_range with a hole punched around mu = 0.

    Ranges touching or straddling 0 are shrunk away from it by a relative
    margin (returned as the second element so callers can report the
    exclusion); ranges on one side of 0 are used as given.  Spacing is
    "linear" or "geometric" per branch.
    """
    lo, hi = float(mu_range[0]), float(mu_range[1])
    if not lo <= hi:
        raise InvalidConfigurationError(f"empty mu range ({lo}, {hi})")
    if grid_size < 1:
        raise InvalidConfigurationError("grid_size must be at least 1")
    if spacing not in ("linear", "geometric"):
        raise InvalidConfigurationError(f"unknown grid spacing {spacing!r}")

    if lo > 0.0 or hi < 0.0:
        return _branch_grid(lo, hi, grid_size, spacing), None

    eps = ZERO_EXCLUSION_FRACTION * max(abs(lo), abs(hi))
    if eps == 0.0:
        raise InvalidConfigurationError("mu range contains only 0")
    branches = []
    if lo <= -eps:
        branches.append((lo, -eps))
    if hi >= eps:
        branches.append((eps, hi))
    if not branches:
        raise InvalidConfigurationError(
            f"mu range ({lo}, {hi}) lies entirely in the excluded zone around 0"
        )
    widths = np.array([b[1] - b[0] for b in branches])
    counts = np.maximum(1, np.round(grid_size * widths / widths.sum()).astype(int))
    while counts.sum() > grid_size and counts.max() > 1:
        counts[counts.argmax()] -= 1
    grid = np.concatenate([
        _branch_grid(b_lo, b_hi, cnt, spacing) for (b_lo, b_hi), cnt in zip(branches, counts)
    ])
    return grid, eps


def search_mu(
    problem: ResidualProblem,
    ball: Ball,
    mu_range: tuple[float, float],
    grid_size: int,
    method: str | None = None,
    sampling: SamplingConfig | None = None,
    spacing: str = "linear",
) -> TransformSearchResult:
    """Sweep the scaling parameter mu looking for a passing certificate.

    For each grid mu the problem is rewritten as G = F o B^-1 with
    B(v) = mu*v and certified on the given ball.  Quadratic problems under
    the closed-form method use :func:`transformed_certificate_quadratic`;
    otherwise the sampled constant is re-estimated on each G directly.  The
    best entry maximizes slack among passing entries (ties: least distortion
    |mu - 1|, then smaller mu); when nothing passes the same ordering is
    applied to all entries.
    """
    if method is None:
        method = METHOD_CLOSED_FORM if problem.is_quadratic else METHOD_SAMPLED
    if ball.n != problem.n:
        raise InputShapeError(
            f"ball center has dimension {ball.n}, problem expects {problem.n}"
        )
    grid, zero_exclusion = build_mu_grid(mu_range, grid_size, spacing)
    if grid.size == 0:
        raise InvalidConfigurationError("mu grid is empty")

    entries: list[tuple[float, Certificate]] = []
    for mu in grid:
        mu = float(mu)
        if method == METHOD_CLOSED_FORM:
            if not problem.is_quadratic:
                raise InvalidConfigurationError(
                    "closed-form search requires a quadratic problem"
                )
            cert = transformed_certificate_quadratic(
                problem.params["lambda"], mu, ball.center[0], ball.radius
            )
        else:
            g = recover_problem_independent(scale(mu), problem)
            cert = certify(g, ball, METHOD_SAMPLED, sampling)
        entries.append((mu, cert))

    passing = [(mu, cert) for mu, cert in entries if cert.passed]
    pool = passing if passing else entries
    best_mu, best_cert = min(pool, key=lambda e: (-e[1].slack, abs(e[0] - 1.0), e[0]))
    sweep = [
        SweepPoint(mu, cert.c, cert.lhs, cert.rhs, cert.slack, cert.passed)
        for mu, cert in entries
    ]
    return TransformSearchResult(
        best_parameter=best_mu,
        certificate=best_cert,
        sweep=sweep,
        any_passed=bool(passing),
        zero_exclusion=zero_exclusion,
    )
