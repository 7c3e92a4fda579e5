"""Command-line frontend: certify, search, solve, selftest.

One run is driven by one JSON config file and produces one JSON report (plus
optional CSV artifacts).  Exit codes: 0 = ran to completion (verdicts may
still be FAIL), 1 = selftest failure, 2 = config error, 3 = runtime error.

Config file schema (defaults in parentheses):

    {
      "problem":     {"name": "quadratic", "lambda": 1.0}
                   | {"name": "bvp", "grid_points": 64, "gamma": 1.0,
                      "forcing": "manufactured_sin" ("zero"),
                      "quadrature_weights": false},
      "ball":        {"center": [2.0], "radius": 0.5},
      "certificate": {"method": "sampled" | "closed_form_quadratic" ("sampled"),
                      "samples_per_axis": 1001, "residual_floor": 1e-12,
                      "safety": 0.9},                                  # optional
      "transform":   {"family": "scale", "mu_min": 0.5, "mu_max": 3.0,
                      "grid_size": 51, "spacing": "linear"},           # optional
      "descent":     {"residual_tolerance": 1e-10, "max_iterations": 10000,
                      "initial_step": 1.0, "backtrack_factor": 0.5,
                      "sufficient_decrease": 1e-4,
                      "ball_policy": "clip_to_ball",
                      "direction": "steepest"},                        # optional
      "output":      {"report": "...", "sweep_csv": "...",
                      "trace_csv": "..."},                             # optional
      "seed":        42                                                # optional
    }
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import report as report_io
from .certificate import (
    METHOD_CLOSED_FORM,
    METHOD_SAMPLED,
    Ball,
    SamplingConfig,
    certify,
)
from .descent import DescentConfig, solve, verify_solution
from .exceptions import ConfigError, InvalidConfigurationError, ZerocertError
from .functional import check_gradient, residual_norm
from .problems import ResidualProblem, make_bvp, make_quadratic
from .selftest import run_selftest
from .transforms import pull_back_zero, recover_problem_independent, scale, search_mu

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_RUNTIME_ERROR = 3

FORCING_NAMES = ("zero", "sin_pi", "manufactured_sin")

_KINDS = {
    "number": (int, float),
    "int": (int,),
    "string": (str,),
    "bool": (bool,),
    "dict": (dict,),
    "list": (list,),
}


def _get(section: dict, key: str, path: str, kind: str, required: bool = True, default=None):
    dotted = f"{path}.{key}" if path else key
    if key not in section:
        if required:
            raise ConfigError(f"{dotted}: missing required key")
        return default
    value = section[key]
    allowed = _KINDS[kind]
    if kind in ("number", "int") and isinstance(value, bool):
        raise ConfigError(f"{dotted}: expected a {kind}, got a bool")
    if not isinstance(value, allowed):
        raise ConfigError(f"{dotted}: expected a {kind}, got {type(value).__name__}")
    return value


def load_config(path: str | Path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def build_problem(cfg: dict) -> ResidualProblem:
    pcfg = _get(cfg, "problem", "", "dict")
    name = _get(pcfg, "name", "problem", "string")
    if name == "quadratic":
        lam = _get(pcfg, "lambda", "problem", "number")
        return make_quadratic(float(lam))
    if name == "bvp":
        grid_points = _get(pcfg, "grid_points", "problem", "int")
        gamma = _get(pcfg, "gamma", "problem", "number", required=False, default=0.0)
        forcing = _get(pcfg, "forcing", "problem", "string", required=False, default="zero")
        weighted = _get(pcfg, "quadrature_weights", "problem", "bool", required=False, default=False)
        if forcing not in FORCING_NAMES:
            raise ConfigError(
                f"problem.forcing: unknown forcing {forcing!r}, expected one of {FORCING_NAMES}"
            )
        if grid_points < 2:
            raise ConfigError("problem.grid_points: must be at least 2")
        return make_bvp(grid_points, float(gamma), forcing, quadrature_weights=weighted)
    raise ConfigError(f"problem.name: unknown problem {name!r}")


def build_ball(cfg: dict, problem: ResidualProblem) -> Ball:
    bcfg = _get(cfg, "ball", "", "dict")
    center = _get(bcfg, "center", "ball", "list")
    radius = _get(bcfg, "radius", "ball", "number")
    if not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in center):
        raise ConfigError("ball.center: entries must be numbers")
    if len(center) != problem.n:
        raise ConfigError(
            f"ball.center: expected {problem.n} entries for problem "
            f"{problem.name!r}, got {len(center)}"
        )
    if not (isinstance(radius, (int, float)) and radius > 0):
        raise ConfigError("ball.radius: must be a positive number")
    return Ball(np.asarray(center, dtype=float), float(radius))


def build_certificate_settings(cfg: dict, problem: ResidualProblem, seed: int):
    ccfg = _get(cfg, "certificate", "", "dict", required=False, default={})
    method = _get(ccfg, "method", "certificate", "string", required=False, default=METHOD_SAMPLED)
    if method not in (METHOD_CLOSED_FORM, METHOD_SAMPLED):
        raise ConfigError(f"certificate.method: unknown method {method!r}")
    if method == METHOD_CLOSED_FORM and not problem.is_quadratic:
        raise ConfigError(
            "certificate.method: closed_form_quadratic requires the quadratic problem"
        )
    try:
        sampling = SamplingConfig(
            samples_per_axis=_get(ccfg, "samples_per_axis", "certificate", "int",
                                  required=False, default=1001),
            residual_floor=_get(ccfg, "residual_floor", "certificate", "number",
                                required=False, default=1e-12),
            safety=_get(ccfg, "safety", "certificate", "number",
                        required=False, default=0.9),
            seed=seed,
        )
    except InvalidConfigurationError as exc:
        raise ConfigError(f"certificate: {exc}") from exc
    return method, sampling


def build_transform_settings(cfg: dict, required: bool):
    tcfg = _get(cfg, "transform", "", "dict", required=required, default=None)
    if tcfg is None:
        return None
    family = _get(tcfg, "family", "transform", "string", required=False, default="scale")
    if family != "scale":
        raise ConfigError(f"transform.family: only 'scale' is searchable, got {family!r}")
    mu_min = float(_get(tcfg, "mu_min", "transform", "number"))
    mu_max = float(_get(tcfg, "mu_max", "transform", "number"))
    grid_size = _get(tcfg, "grid_size", "transform", "int", required=False, default=51)
    spacing = _get(tcfg, "spacing", "transform", "string", required=False, default="linear")
    if spacing not in ("linear", "geometric"):
        raise ConfigError(f"transform.spacing: expected 'linear' or 'geometric', got {spacing!r}")
    if grid_size < 1:
        raise ConfigError("transform.grid_size: must be at least 1")
    return {"mu_range": (mu_min, mu_max), "grid_size": grid_size, "spacing": spacing}


def build_descent_config(cfg: dict) -> DescentConfig:
    dcfg = _get(cfg, "descent", "", "dict", required=False, default={})
    kwargs = {}
    for key, kind in (
        ("residual_tolerance", "number"),
        ("max_iterations", "int"),
        ("initial_step", "number"),
        ("backtrack_factor", "number"),
        ("sufficient_decrease", "number"),
        ("ball_policy", "string"),
        ("direction", "string"),
    ):
        value = _get(dcfg, key, "descent", kind, required=False)
        if value is not None:
            kwargs[key] = value
    try:
        return DescentConfig(**kwargs)
    except InvalidConfigurationError as exc:
        raise ConfigError(f"descent: {exc}") from exc


def _resolve_seed(cfg: dict, args) -> int:
    if args.seed is not None:
        return args.seed
    seed = _get(cfg, "seed", "", "int", required=False, default=42)
    return int(seed)


def _output_path(cfg: dict, args, key: str, flag_value, default=None):
    if flag_value:
        return flag_value
    ocfg = _get(cfg, "output", "", "dict", required=False, default={})
    return _get(ocfg, key, "output", "string", required=False, default=default)


def _problem_summary(problem: ResidualProblem) -> dict:
    return {
        "name": problem.name,
        "n": problem.n,
        "m": problem.m,
        "params": dict(problem.params),
        "has_analytic_jacobian": problem.has_analytic_jacobian,
    }


def _gradient_check_summary(problem: ResidualProblem, ball: Ball) -> dict:
    rep = check_gradient(problem, ball.center)
    return {
        "point": [float(x) for x in rep.point],
        "max_relative_error": rep.max_relative_error,
    }


def _fmt(v: float) -> str:
    return report_io.format_float(v)


def _print_point(label: str, u: np.ndarray) -> str:
    if len(u) <= 4:
        return f"{label}=[" + ", ".join(_fmt(x) for x in u) + "]"
    return f"{label}=<{len(u)}-dim vector, norm={_fmt(float(np.linalg.norm(u)))}>"


def cmd_certify(cfg: dict, args) -> dict:
    seed = _resolve_seed(cfg, args)
    problem = build_problem(cfg)
    ball = build_ball(cfg, problem)
    method, sampling = build_certificate_settings(cfg, problem, seed)

    t0 = time.perf_counter()
    cert = certify(problem, ball, method, sampling)
    certify_s = time.perf_counter() - t0
    print(cert.verdict_line(_fmt))

    return {
        "command": "certify",
        "config": cfg,
        "seed": seed,
        "problem": _problem_summary(problem),
        "gradient_check": _gradient_check_summary(problem, ball),
        "certificate": cert.to_dict(),
        "timings": {"certify_s": certify_s},
    }


def cmd_search(cfg: dict, args) -> dict:
    seed = _resolve_seed(cfg, args)
    problem = build_problem(cfg)
    ball = build_ball(cfg, problem)
    method, sampling = build_certificate_settings(cfg, problem, seed)
    tset = build_transform_settings(cfg, required=True)

    t0 = time.perf_counter()
    result = search_mu(
        problem, ball, tset["mu_range"], tset["grid_size"],
        method=method, sampling=sampling, spacing=tset["spacing"],
    )
    search_s = time.perf_counter() - t0

    if result.zero_exclusion is not None:
        print(f"note: excluded mu in (-{_fmt(result.zero_exclusion)}, {_fmt(result.zero_exclusion)})")
    word = "PASS" if result.any_passed else "FAIL"
    print(f"{word} best mu={_fmt(result.best_parameter)} slack={_fmt(result.certificate.slack)}")

    sweep_csv = _output_path(cfg, args, "sweep_csv", args.sweep_csv)
    if sweep_csv:
        report_io.write_sweep_csv(sweep_csv, result.sweep)

    return {
        "command": "search",
        "config": cfg,
        "seed": seed,
        "problem": _problem_summary(problem),
        "gradient_check": _gradient_check_summary(problem, ball),
        "transform_search": result.to_dict(),
        "timings": {"search_s": search_s},
    }


def cmd_solve(cfg: dict, args) -> dict:
    seed = _resolve_seed(cfg, args)
    problem = build_problem(cfg)
    ball = build_ball(cfg, problem)
    descent_cfg = build_descent_config(cfg)
    tset = build_transform_settings(cfg, required=False)
    timings: dict[str, float] = {}

    certificate = None
    if "certificate" in cfg:
        method, sampling = build_certificate_settings(cfg, problem, seed)
        t0 = time.perf_counter()
        certificate = certify(problem, ball, method, sampling)
        timings["certify_s"] = time.perf_counter() - t0
        print(certificate.verdict_line(_fmt))

    search_result = None
    target = problem
    transform = None
    if tset is not None:
        method, sampling = build_certificate_settings(cfg, problem, seed)
        t0 = time.perf_counter()
        search_result = search_mu(
            problem, ball, tset["mu_range"], tset["grid_size"],
            method=method, sampling=sampling, spacing=tset["spacing"],
        )
        timings["search_s"] = time.perf_counter() - t0
        word = "PASS" if search_result.any_passed else "FAIL"
        print(f"{word} best mu={_fmt(search_result.best_parameter)} "
              f"slack={_fmt(search_result.certificate.slack)}")
        if search_result.any_passed:
            transform = scale(search_result.best_parameter)
            target = recover_problem_independent(transform, problem)
        sweep_csv = _output_path(cfg, args, "sweep_csv", args.sweep_csv)
        if sweep_csv:
            report_io.write_sweep_csv(sweep_csv, search_result.sweep)

    trace_csv = _output_path(cfg, args, "trace_csv", args.trace_csv)
    t0 = time.perf_counter()
    result = solve(target, ball, descent_cfg, record_trace=bool(trace_csv))
    timings["descent_s"] = time.perf_counter() - t0
    if trace_csv:
        report_io.write_trace_csv(trace_csv, result.trace or ())

    if transform is not None:
        u = pull_back_zero(transform, result.u)
    else:
        u = result.u
    verified = verify_solution(target, result.u, ball, descent_cfg.residual_tolerance)
    final_residual = residual_norm(problem, u)

    print(f"{result.status} iterations={result.iterations} "
          f"residual={_fmt(final_residual)} {_print_point('u', u)} "
          f"{'VERIFIED' if verified else 'FAIL'}")

    descent_dict = result.to_dict()
    descent_dict["u_pulled_back"] = [float(x) for x in u]
    descent_dict["original_residual_norm"] = final_residual
    return {
        "command": "solve",
        "config": cfg,
        "seed": seed,
        "problem": _problem_summary(problem),
        "gradient_check": _gradient_check_summary(problem, ball),
        "certificate": certificate.to_dict() if certificate else None,
        "transform_search": search_result.to_dict() if search_result else None,
        "descent": descent_dict,
        "verified": verified,
        "timings": timings,
    }


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zerocert",
        description="Existence certificates for zeros of residual maps, "
                    "transform relaxation, and ball-constrained descent.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_config in (
        ("certify", True), ("search", True), ("solve", True), ("selftest", False),
    ):
        p = sub.add_parser(name)
        if needs_config:
            p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--report", default=None, help="JSON report output path")
        p.add_argument("--sweep-csv", dest="sweep_csv", default=None,
                       help="CSV output for transform sweeps")
        p.add_argument("--trace-csv", dest="trace_csv", default=None,
                       help="CSV output for the descent iteration log")
        p.add_argument("--seed", type=int, default=None,
                       help="sampling seed (default 42)")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if args.command == "selftest":
        return run_selftest(args.seed if args.seed is not None else 42)
    try:
        cfg = load_config(args.config)
        handler = {"certify": cmd_certify, "search": cmd_search, "solve": cmd_solve}[args.command]
        report = handler(cfg, args)
        report_path = _output_path(cfg, args, "report", args.report,
                                   default=f"{args.command}_report.json")
        report_io.write_json(report_path, report)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (ZerocertError, ValueError, OSError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
