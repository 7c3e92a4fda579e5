import numpy as np
import pytest

from zerocert import (
    InputShapeError,
    check_gradient,
    eval_jacobian,
    eval_residual,
    grad_phi,
    make_bvp,
    make_quadratic,
    phi,
)


def test_phi_values():
    q = make_quadratic(1.0)
    assert phi(q, [2.0]) == pytest.approx(4.5)
    assert phi(q, [1.0]) == 0.0
    assert phi(q, [0.0]) == pytest.approx(0.5)


def test_phi_shape_error():
    with pytest.raises(InputShapeError):
        phi(make_quadratic(1.0), [1.0, 2.0])


def test_grad_phi_values():
    assert grad_phi(make_quadratic(1.0), [2.0]) == pytest.approx([12.0])
    assert grad_phi(make_quadratic(1.0), [1.0]) == pytest.approx([0.0], abs=0.0)
    assert grad_phi(make_quadratic(2.0), [-1.0]) == pytest.approx([-4.0])


def test_phi_nonnegative_and_vanishes_only_at_zeros():
    rng = np.random.default_rng(3)
    q = make_quadratic(2.0)
    for _ in range(200):
        v = rng.uniform(-2.0, 2.0, size=1)
        value = phi(q, v)
        assert value >= 0.0
        rn = np.linalg.norm(eval_residual(q, v))
        if rn <= 1e-12:
            assert value <= 1e-24
        if value <= 1e-24:
            assert rn <= 1.5e-12


def test_check_gradient_quadratic():
    rep = check_gradient(make_quadratic(1.0), [2.0])
    assert rep.max_relative_error <= 1e-6


def test_check_gradient_bvp_random_point():
    rng = np.random.default_rng(11)
    p = make_bvp(16, 1.0, "manufactured_sin")
    rep = check_gradient(p, rng.uniform(-1.0, 1.0, size=16))
    assert rep.max_relative_error <= 1e-6


def test_gradient_vanishes_at_zero_of_residual():
    rep = check_gradient(make_quadratic(4.0), [0.5])
    assert np.max(np.abs(rep.analytic_gradient)) <= 1e-10


@pytest.mark.parametrize(
    "problem",
    [make_quadratic(1.0), make_quadratic(2.0), make_bvp(16, 0.0, "sin_pi")],
    ids=["quadratic-1", "quadratic-2", "bvp-16"],
)
def test_gradient_matches_finite_differences(problem):
    rng = np.random.default_rng(5)
    for _ in range(100):
        v = rng.uniform(-2.0, 2.0, size=problem.n)
        assert check_gradient(problem, v).max_relative_error <= 1e-6


def test_dimension_one_gradient_equals_jacobian_times_residual():
    rng = np.random.default_rng(9)
    q = make_quadratic(1.7)
    for _ in range(50):
        v = rng.uniform(-3.0, 3.0, size=1)
        direct = eval_jacobian(q, v)[0, 0] * eval_residual(q, v)[0]
        assert grad_phi(q, v)[0] == direct


def test_weighted_norm_gradient_consistent():
    p = make_bvp(12, 1.0, "manufactured_sin", quadrature_weights=True)
    assert p.weights is not None
    rng = np.random.default_rng(13)
    rep = check_gradient(p, rng.uniform(-1.0, 1.0, size=12))
    assert rep.max_relative_error <= 1e-6
