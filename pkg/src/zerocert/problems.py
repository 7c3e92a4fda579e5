"""Residual-map problems: F maps n-vectors to m-vectors and we look for F(u) = 0.

A problem bundles the residual evaluation, an (optional) analytic Jacobian,
and metadata naming the built-in family it came from.  Problems are immutable
value objects; evaluation is pure and safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .exceptions import InputShapeError, InvalidConfigurationError

FD_STEP_SCALE = 1e-6  # per-coordinate central-difference step is FD_STEP_SCALE*(1+|v_i|)


@dataclass(frozen=True)
class QuadraticParams:
    """Coefficient of the scalar quadratic residual lam*u**2 - 1."""

    lam: float


@dataclass(frozen=True)
class ResidualProblem:
    """A residual map F: R^n -> R^m with optional analytic Jacobian.

    When ``jacobian`` is None, Jacobian queries fall back to central finite
    differences and ``has_analytic_jacobian`` is False.  ``weights`` are
    optional positive diagonal quadrature weights for the codomain norm
    (default unweighted Euclidean).  ``params`` records the construction
    parameters of built-in families ("quadratic", "bvp") so that closed-form
    code paths can recognize them.
    """

    name: str
    n: int
    m: int
    residual: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray] | None = None
    weights: np.ndarray | None = None
    params: Mapping[str, object] = field(default_factory=dict)

    @property
    def has_analytic_jacobian(self) -> bool:
        return self.jacobian is not None

    @property
    def is_quadratic(self) -> bool:
        return self.name == "quadratic" and "lambda" in self.params


def _check_vector(problem: ResidualProblem, v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (problem.n,):
        raise InputShapeError(
            f"problem {problem.name!r} expects a vector of length {problem.n}, "
            f"got shape {v.shape}"
        )
    return v


def eval_residual(problem: ResidualProblem, v) -> np.ndarray:
    """Evaluate F(v) as a length-m vector."""
    v = _check_vector(problem, v)
    out = np.asarray(problem.residual(v), dtype=float)
    if out.shape != (problem.m,):
        raise InputShapeError(
            f"residual of {problem.name!r} returned shape {out.shape}, "
            f"expected ({problem.m},)"
        )
    return out


def finite_difference_jacobian(problem: ResidualProblem, v) -> np.ndarray:
    """Central-difference Jacobian with step FD_STEP_SCALE*(1+|v_i|) per coordinate."""
    v = _check_vector(problem, v)
    jac = np.empty((problem.m, problem.n))
    for i in range(problem.n):
        h = FD_STEP_SCALE * (1.0 + abs(v[i]))
        vp = v.copy()
        vm = v.copy()
        vp[i] += h
        vm[i] -= h
        jac[:, i] = (eval_residual(problem, vp) - eval_residual(problem, vm)) / (2.0 * h)
    return jac


def eval_jacobian(problem: ResidualProblem, v) -> np.ndarray:
    """Evaluate DF(v) as an m-by-n matrix.

    Uses the analytic Jacobian when the problem declares one, otherwise a
    central finite-difference approximation (``problem.has_analytic_jacobian``
    tells which one you got).
    """
    v = _check_vector(problem, v)
    if problem.jacobian is None:
        return finite_difference_jacobian(problem, v)
    jac = np.asarray(problem.jacobian(v), dtype=float)
    if jac.shape != (problem.m, problem.n):
        raise InputShapeError(
            f"jacobian of {problem.name!r} returned shape {jac.shape}, "
            f"expected ({problem.m}, {problem.n})"
        )
    return jac


def make_quadratic(params: QuadraticParams | float) -> ResidualProblem:
    """Scalar problem F(u) = lam*u**2 - 1 with analytic derivative 2*lam*u.

    Zeros sit at +-1/sqrt(lam) for lam > 0; lam = 0 gives the zero-free
    constant map F = -1.
    """
    lam = float(params.lam if isinstance(params, QuadraticParams) else params)
    if not np.isfinite(lam):
        raise InvalidConfigurationError("quadratic coefficient must be finite")

    def residual(v: np.ndarray) -> np.ndarray:
        return np.array([lam * v[0] * v[0] - 1.0])

    def jacobian(v: np.ndarray) -> np.ndarray:
        return np.array([[2.0 * lam * v[0]]])

    return ResidualProblem(
        name="quadratic",
        n=1,
        m=1,
        residual=residual,
        jacobian=jacobian,
        params={"lambda": lam},
    )


def bvp_forcing(name: str, gamma: float = 0.0) -> Callable[[np.ndarray], np.ndarray]:
    """Named forcing terms for the built-in boundary-value problem.

    - "zero": f = 0, so v = 0 solves the homogeneous problem.
    - "sin_pi": f(t) = pi^2*sin(pi*t), the forcing whose gamma=0 solution is sin(pi*t).
    - "manufactured_sin": f(t) = pi^2*sin(pi*t) + gamma*sin(pi*t)^3, which makes
      sin(pi*t) the exact continuum solution for any gamma.
    """
    if name == "zero":
        return lambda t: np.zeros_like(np.asarray(t, dtype=float))
    if name == "sin_pi":
        return lambda t: np.pi**2 * np.sin(np.pi * np.asarray(t, dtype=float))
    if name == "manufactured_sin":
        def forcing(t):
            s = np.sin(np.pi * np.asarray(t, dtype=float))
            return np.pi**2 * s + gamma * s**3
        return forcing
    raise InvalidConfigurationError(f"unknown forcing {name!r}")


def make_bvp(
    grid_points: int,
    nonlinearity_coefficient: float,
    forcing: Callable[[np.ndarray], np.ndarray] | str = "zero",
    quadrature_weights: bool = False,
) -> ResidualProblem:
    """Second-order central-difference discretization of a two-point BVP.

    Discretizes -u''(t) + gamma*u(t)^3 = f(t) on [0, 1] with u(0) = u(1) = 0
    on N interior points t_i = i*h, h = 1/(N+1).  The residual at v is

        -(v[i-1] - 2 v[i] + v[i+1])/h^2 + gamma*v[i]^3 - f(t_i)

    with boundary values 0, so F maps R^N to R^N.  The Jacobian is the
    tridiagonal difference matrix plus the diagonal 3*gamma*v^2.

    ``forcing`` is a vectorized callable t -> f(t) or the name of a built-in
    (see :func:`bvp_forcing`).  ``quadrature_weights=True`` attaches diagonal
    weights h to the codomain norm so that it approximates the L2 norm.
    """
    n = int(grid_points)
    if n < 2:
        raise InvalidConfigurationError("bvp needs at least 2 interior grid points")
    gamma = float(nonlinearity_coefficient)
    forcing_name = forcing if isinstance(forcing, str) else "custom"
    if isinstance(forcing, str):
        forcing = bvp_forcing(forcing, gamma)

    h = 1.0 / (n + 1)
    t = h * np.arange(1, n + 1)
    f_vals = np.asarray(forcing(t), dtype=float)
    if f_vals.shape != (n,):
        raise InvalidConfigurationError(
            f"forcing must map the grid to shape ({n},), got {f_vals.shape}"
        )
    inv_h2 = 1.0 / (h * h)

    def residual(v: np.ndarray) -> np.ndarray:
        padded = np.concatenate(([0.0], v, [0.0]))
        second = (padded[:-2] - 2.0 * padded[1:-1] + padded[2:]) * inv_h2
        return -second + gamma * v**3 - f_vals

    def jacobian(v: np.ndarray) -> np.ndarray:
        jac = np.zeros((n, n))
        idx = np.arange(n)
        jac[idx, idx] = 2.0 * inv_h2 + 3.0 * gamma * v**2
        jac[idx[:-1], idx[:-1] + 1] = -inv_h2
        jac[idx[1:], idx[1:] - 1] = -inv_h2
        return jac

    return ResidualProblem(
        name="bvp",
        n=n,
        m=n,
        residual=residual,
        jacobian=jacobian,
        weights=h * np.ones(n) if quadrature_weights else None,
        params={"grid_points": n, "gamma": gamma, "forcing": forcing_name},
    )
