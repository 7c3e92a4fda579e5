"""Built-in oracle suites behind the ``selftest`` subcommand.

Each suite pits a computed quantity against an independent reference: the
sampled domination constant against the quadratic closed form, the two
equivalent transformed-certificate formulations against each other, and the
analytic gradient against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .certificate import Ball, domination_constant_sampled, quadratic_domination_constant
from .functional import check_gradient
from .problems import make_bvp, make_quadratic
from .transforms import transformed_certificate_quadratic

EQUIVALENCE_GRID = {
    "lam": (0.5, 1.0, 2.0),
    "mu": (0.5, 1.0, 2.0, 3.0),
    "x": (-3.0, -1.0, 0.4, 1.2, 2.0),
    "r": (0.25, 0.5, 1.0),
}


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: int
    failed: int

    @property
    def ok(self) -> bool:
        return self.failed == 0


def suite_closed_form_vs_sampled(seed: int = 42) -> SuiteResult:
    """Sampled constant (safety 1, 1001 samples) within 1% of the closed form."""
    rng = np.random.default_rng(seed)
    passed = failed = 0
    while passed + failed < 10:
        lam = rng.uniform(0.25, 4.0)
        x = rng.uniform(-3.0, 3.0)
        r = rng.uniform(0.1, 1.0)
        exact = quadratic_domination_constant(lam, x, r)
        if exact <= 0.0:
            continue
        sampled = domination_constant_sampled(
            make_quadratic(lam), Ball(np.array([x]), r),
            samples_per_axis=1001, safety=1.0, seed=seed,
        )
        if abs(sampled - exact) <= 0.01 * exact:
            passed += 1
        else:
            failed += 1
    return SuiteResult("closed_form_vs_sampled", passed, failed)


def suite_equivalence_grid() -> SuiteResult:
    """Transformed-problem and original-scale certificate forms agree."""
    passed = failed = 0
    for lam in EQUIVALENCE_GRID["lam"]:
        for mu in EQUIVALENCE_GRID["mu"]:
            for x in EQUIVALENCE_GRID["x"]:
                for r in EQUIVALENCE_GRID["r"]:
                    lam_g = lam / mu**2
                    direct = abs(lam_g * x * x - 1.0) <= r * quadratic_domination_constant(lam_g, x, r)
                    try:
                        cert = transformed_certificate_quadratic(lam, mu, x, r)
                        agree = cert.passed == direct
                    except Exception:
                        agree = False
                    if agree:
                        passed += 1
                    else:
                        failed += 1
    return SuiteResult("equivalence_grid", passed, failed)


def suite_gradient_checks(seed: int = 42) -> SuiteResult:
    """Analytic gradient vs finite differences on the built-in problems."""
    rng = np.random.default_rng(seed)
    problems = [
        make_quadratic(1.0),
        make_quadratic(2.0),
        make_bvp(16, 0.0, "sin_pi"),
        make_bvp(16, 1.0, "manufactured_sin"),
    ]
    passed = failed = 0
    for problem in problems:
        for _ in range(20):
            v = rng.uniform(-2.0, 2.0, size=problem.n)
            if check_gradient(problem, v).max_relative_error <= 1e-6:
                passed += 1
            else:
                failed += 1
    return SuiteResult("gradient_checks", passed, failed)


def run_selftest(seed: int = 42, out: Callable[[str], None] = print) -> int:
    """Run all suites, print a pass/fail table, return 0 iff everything passed."""
    suites = [
        suite_closed_form_vs_sampled(seed),
        suite_equivalence_grid(),
        suite_gradient_checks(seed),
    ]
    width = max(len(s.name) for s in suites)
    out(f"{'suite':<{width}}  pass  fail")
    for s in suites:
        out(f"{s.name:<{width}}  {s.passed:>4}  {s.failed:>4}")
    ok = all(s.ok for s in suites)
    out("selftest: " + ("OK" if ok else "FAILED"))
    return 0 if ok else 1
