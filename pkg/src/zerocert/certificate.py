"""Existence certificates for zeros of a residual map on a closed ball.

A certificate checks two conditions on the ball B_r(x):

  1. a gradient-domination constant c >= 0 with
     ||grad phi(v)|| >= c * ||F(v)||   for v in B_r(x), and
  2. ||F(x)|| <= r * c.

When both hold, a zero of F exists inside the ball.  There is a built-in
tension between them: growing the ball usually shrinks the largest valid c
while the right-hand side r*c needs to stay large; the certificate records
the slack r*c - ||F(x)|| to quantify how the conflict resolved.

Two estimators for c are provided: the exact closed form for the quadratic
family, and a conservative sampled infimum of ||grad phi|| / ||F|| over the
ball.  Sampled certificates are advisory (an estimate, not a proven bound).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InputShapeError, InvalidConfigurationError, InvalidMethodError
from .functional import grad_phi, residual_norm
from .problems import ResidualProblem

METHOD_CLOSED_FORM = "closed_form_quadratic"
METHOD_SAMPLED = "sampled"

SAMPLE_CAP = 10**6  # hard cap on sampled points in dimension >= 2


@dataclass(frozen=True)
class Ball:
    """Closed ball of radius r centered at x (Euclidean norm on the domain)."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.atleast_1d(np.asarray(self.center, dtype=float))
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0.0:
            raise InvalidConfigurationError("ball radius must be positive")

    @property
    def n(self) -> int:
        return self.center.shape[0]

    def contains(self, v, tol: float = 0.0) -> bool:
        v = np.asarray(v, dtype=float)
        return float(np.linalg.norm(v - self.center)) <= self.radius + tol

    def to_dict(self) -> dict:
        return {"center": [float(c) for c in self.center], "radius": self.radius}


@dataclass(frozen=True)
class SamplingConfig:
    """Settings for the sampled domination-constant estimator.

    Points with ||F(v)|| <= residual_floor are excluded from the infimum
    (the domination inequality is vacuous there and the ratio is ill
    conditioned).  ``safety`` in (0, 1] shrinks the estimate to hedge
    against the sampled infimum overshooting the true one.
    """

    samples_per_axis: int = 1001
    residual_floor: float = 1e-12
    safety: float = 0.9
    seed: int = 42

    def __post_init__(self):
        if self.samples_per_axis < 2:
            raise InvalidConfigurationError("samples_per_axis must be at least 2")
        if not self.residual_floor > 0.0:
            raise InvalidConfigurationError("residual_floor must be positive")
        if not 0.0 < self.safety <= 1.0:
            raise InvalidConfigurationError("safety must lie in (0, 1]")


@dataclass(frozen=True)
class Certificate:
    """Verdict of the two ball conditions, with slack.

    ``lhs`` is ||F(x)||, ``rhs`` is r*c, ``passed`` is the non-strict
    comparison lhs <= rhs (ties pass), and ``slack = rhs - lhs``.  A passed
    certificate asserts a zero of F exists in the ball; when the method is
    "sampled" the constant is an estimate and the certificate is advisory.
    """

    ball: Ball
    c: float
    lhs: float
    rhs: float
    slack: float
    passed: bool
    method: str
    sample_count: int = 0

    @property
    def advisory(self) -> bool:
        return self.method == METHOD_SAMPLED

    def to_dict(self) -> dict:
        return {
            "ball": self.ball.to_dict(),
            "c": self.c,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "passed": self.passed,
            "method": self.method,
            "sample_count": self.sample_count,
            "advisory": self.advisory,
        }

    def verdict_line(self, fmt=lambda v: format(v, ".17g")) -> str:
        word = "PASS" if self.passed else "FAIL"
        return (
            f"{word} lhs={fmt(self.lhs)} rhs={fmt(self.rhs)} "
            f"slack={fmt(self.slack)} c={fmt(self.c)} method={self.method}"
        )


def quadratic_domination_constant(lam: float, x: float, r: float) -> float:
    """Largest domination constant for F(u) = lam*u**2 - 1 on [x-r, x+r].

    Away from zeros of F the domination inequality reduces to 2|lam*v| >= c,
    so the largest valid c is 2|lam| times the distance from the origin to
    the interval: zero when the ball straddles the origin, else 2|lam|(x-r)
    for balls right of it and 2|lam|(-x-r) for balls left of it.
    """
    if not r > 0.0:
        raise InvalidConfigurationError("ball radius must be positive")
    lam = float(lam)
    x = float(x)
    r = float(r)
    if x - r <= 0.0 <= x + r:
        return 0.0
    if x - r >= 0.0:
        return 2.0 * abs(lam) * (x - r)
    return 2.0 * abs(lam) * (-x - r)


def _first_primes(k: int) -> list[int]:
    primes: list[int] = []
    cand = 2
    while len(primes) < k:
        if all(cand % p for p in primes):
            primes.append(cand)
        cand += 1
    return primes


def _radical_inverse(indices: np.ndarray, base: int) -> np.ndarray:
    """Van der Corput radical inverse of each index in the given base."""
    i = indices.astype(np.int64)
    f = 1.0
    out = np.zeros(len(i))
    while np.any(i > 0):
        f /= base
        out += f * (i % base)
        i //= base
    return out


def sample_ball(center: np.ndarray, radius: float, count: int, seed: int = 42) -> np.ndarray:
    """Deterministic low-discrepancy points uniform in a ball.

    Halton points feed Box-Muller pairs to get quasi-random directions; one
    extra Halton dimension gives the radius via the u**(1/n) law.  ``seed``
    offsets the start of the Halton sequence, so runs are reproducible.
    """
    center = np.asarray(center, dtype=float)
    n = center.shape[0]
    pairs = (n + 1) // 2
    bases = _first_primes(2 * pairs + 1)
    # disjoint index windows per seed, so different seeds share no points
    start = 1 + seed * count
    idx = np.arange(start, start + count)
    u = np.column_stack([_radical_inverse(idx, b) for b in bases])
    z = np.empty((count, 2 * pairs))
    for p in range(pairs):
        rho = np.sqrt(-2.0 * np.log(u[:, 2 * p]))
        ang = 2.0 * np.pi * u[:, 2 * p + 1]
        z[:, 2 * p] = rho * np.cos(ang)
        z[:, 2 * p + 1] = rho * np.sin(ang)
    z = z[:, :n]
    norms = np.linalg.norm(z, axis=1)
    norms[norms == 0.0] = 1.0
    radii = radius * u[:, -1] ** (1.0 / n)
    return center + z / norms[:, None] * radii[:, None]


def _sample_points(problem: ResidualProblem, ball: Ball, samples_per_axis: int, seed: int) -> np.ndarray:
    if problem.n == 1:
        x = ball.center[0]
        grid = np.linspace(x - ball.radius, x + ball.radius, samples_per_axis)
        return grid[:, None]
    count = min(samples_per_axis**problem.n, SAMPLE_CAP)
    return sample_ball(ball.center, ball.radius, count, seed)


def domination_constant_sampled(
    problem: ResidualProblem,
    ball: Ball,
    samples_per_axis: int = 1001,
    residual_floor: float = 1e-12,
    safety: float = 0.9,
    seed: int = 42,
) -> float:
    """Estimate the domination constant as a sampled infimum over the ball.

    Returns safety * min ||grad phi(v)|| / ||F(v)|| over sampled points with
    ||F(v)|| above the floor.  In dimension 1 the samples are a uniform grid
    including both endpoints; in higher dimensions a deterministic
    low-discrepancy sequence in the ball, capped at 10^6 points.  Returns 0
    when every sampled point sits at the floor (the infimum is undetermined,
    which yields a conservative certificate).
    """
    cfg = SamplingConfig(samples_per_axis, residual_floor, safety, seed)
    points = _sample_points(problem, ball, cfg.samples_per_axis, cfg.seed)
    best = np.inf
    for v in points:
        rn = residual_norm(problem, v)
        if rn <= cfg.residual_floor:
            continue
        ratio = float(np.linalg.norm(grad_phi(problem, v))) / rn
        if ratio < best:
            best = ratio
    if not np.isfinite(best):
        return 0.0
    return cfg.safety * best


def certify(
    problem: ResidualProblem,
    ball: Ball,
    method: str = METHOD_SAMPLED,
    sampling: SamplingConfig | None = None,
) -> Certificate:
    """Check both ball conditions and report the verdict with slack.

    ``closed_form_quadratic`` is only valid for the quadratic built-in
    family.  Ties lhs == rhs count as passed.
    """
    if ball.n != problem.n:
        raise InputShapeError(
            f"ball center has dimension {ball.n}, problem expects {problem.n}"
        )
    if method == METHOD_CLOSED_FORM:
        if not problem.is_quadratic:
            raise InvalidMethodError(
                f"closed-form constant requires a quadratic problem, got {problem.name!r}"
            )
        c = quadratic_domination_constant(
            problem.params["lambda"], ball.center[0], ball.radius
        )
        count = 0
    elif method == METHOD_SAMPLED:
        cfg = sampling or SamplingConfig()
        c = domination_constant_sampled(
            problem, ball, cfg.samples_per_axis, cfg.residual_floor, cfg.safety, cfg.seed
        )
        count = cfg.samples_per_axis if problem.n == 1 else min(
            cfg.samples_per_axis**problem.n, SAMPLE_CAP
        )
    else:
        raise InvalidMethodError(f"unknown certificate method {method!r}")
    lhs = residual_norm(problem, ball.center)
    rhs = ball.radius * c
    return Certificate(
        ball=ball,
        c=c,
        lhs=lhs,
        rhs=rhs,
        slack=rhs - lhs,
        passed=lhs <= rhs,
        method=method,
        sample_count=count,
    )
