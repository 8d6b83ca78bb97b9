import math

import numpy as np
import pytest

from fbm_minimax.errors import DomainError
from fbm_minimax.kernel import (
    KernelParams,
    c_alpha,
    covariance_fbm,
    eval_K,
    increment_variance_residual,
    kernel_dt,
    row_cross_integral,
    row_norm_sq,
)

# 40-digit mpmath evaluation of the normalizing-constant formula
C_ALPHA_MP = {0.6: 0.10760051841318071863, 0.75: 0.26741115875799758103, 0.9: 0.32448825925734100591}
# midpoint sum with 10**7 nodes of the substituted integrand, H=0.75, t=1, s=0.5
K_1_HALF_H075 = 0.9375919636980571


@pytest.fixture(scope="module")
def p075():
    return KernelParams(0.75)


@pytest.mark.parametrize("H", [0.5, 1.0, 0.3, 1.2])
def test_c_alpha_domain(H):
    with pytest.raises(DomainError):
        c_alpha(H)
    with pytest.raises(DomainError):
        KernelParams(H)


@pytest.mark.parametrize("H", sorted(C_ALPHA_MP))
def test_c_alpha_against_mpmath(H):
    assert c_alpha(H) == pytest.approx(C_ALPHA_MP[H], rel=1e-12)


def test_c_alpha_live_mpmath():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30
    for H in np.linspace(0.51, 0.99, 13):
        a = mp.mpf(H) - mp.mpf("0.5")
        ref = a * mp.sqrt((2 * a + 1) * mp.gamma(1 - a) / (mp.gamma(a + 1) * mp.gamma(1 - 2 * a)))
        assert c_alpha(float(H)) == pytest.approx(float(ref), rel=1e-12)


def test_params_fields(p075):
    assert p075.alpha == 0.75 - 0.5
    assert p075.c_alpha > 0
    with pytest.raises(Exception):
        p075.H = 0.6


def test_diagonal_is_zero(p075):
    for t in (0.1, 0.5, 1.0):
        assert eval_K(p075, t, t) == 0.0
    assert eval_K(p075, 0.3, 0.6) == 0.0


@pytest.mark.parametrize("t,s", [(1.2, 0.5), (0.5, -0.1), (1.0, 1.5)])
def test_eval_domain(p075, t, s):
    with pytest.raises(DomainError):
        eval_K(p075, t, s)


def test_eval_riemann_fixture(p075):
    assert eval_K(p075, 1.0, 0.5) == pytest.approx(K_1_HALF_H075, abs=1e-10)


def test_scaling_example(p075):
    lhs = eval_K(p075, 1.0, 0.4)
    rhs = 2**p075.alpha * eval_K(p075, 0.5, 0.2)
    assert abs(lhs - rhs) <= 2 * p075.quad_tol


def test_covariance_trivial():
    assert covariance_fbm(0.7, 0.3, 0.3) == pytest.approx(0.3**1.4)
    assert covariance_fbm(0.75, 1.0, 0.5) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(DomainError):
        covariance_fbm(0.7, 1.1, 0.5)


def test_covariance_nested_quadrature():
    p = KernelParams(0.7)
    assert abs(row_cross_integral(p, 1.0, 0.5) - covariance_fbm(0.7, 1.0, 0.5)) <= 1e-6


@pytest.mark.parametrize("t", [0.0, 0.5, 1.0])
def test_increment_identity_examples(t):
    p = KernelParams(0.7)
    assert abs(increment_variance_residual(p, t)) <= 1e-6


def test_monotonicity_grid():
    p = KernelParams(0.8)
    grid = np.linspace(0.02, 1.0, 50)
    vals = np.array([[eval_K(p, t, s) for s in grid] for t in grid])
    assert np.all(vals >= 0)
    # nondecreasing in t (down a column), nonincreasing in s (along a row)
    assert np.all(np.diff(vals, axis=0) >= -1e-12)
    lower = np.tril(vals)
    for i in range(len(grid)):
        assert np.all(np.diff(lower[i, : i + 1]) <= 1e-12)


def test_self_similarity_random():
    rng = np.random.default_rng(7)
    for _ in range(200):
        H = rng.uniform(0.55, 0.95)
        p = KernelParams(H)
        t = rng.uniform(0.05, 1.0)
        s = rng.uniform(0.01, 1.0) * t
        c = rng.uniform(0.05, 1.0 / t)
        assert abs(eval_K(p, c * t, c * s) - c**p.alpha * eval_K(p, t, s)) <= 2 * p.quad_tol


@pytest.mark.parametrize("H", [0.6, 0.75, 0.9])
def test_normalization(H):
    p = KernelParams(H)
    for t in np.linspace(0.1, 1.0, 10):
        assert abs(row_norm_sq(p, t) - t ** (2 * H)) <= 1e-6


def test_quadrature_convergence():
    rng = np.random.default_rng(3)
    for _ in range(20):
        H = rng.uniform(0.55, 0.95)
        t = rng.uniform(0.1, 1.0)
        s = rng.uniform(0.01, 0.99) * t
        coarse, fine = KernelParams(H, 1e-8), KernelParams(H, 5e-9)
        assert abs(eval_K(coarse, t, s) - eval_K(fine, t, s)) <= coarse.quad_tol


def test_time_derivative_matches_difference_quotient():
    p = KernelParams(0.7)
    t, s, eps = 0.6, 0.25, 1e-5
    fd = (eval_K(p, t + eps, s) - eval_K(p, t - eps, s)) / (2 * eps)
    assert float(kernel_dt(p, t, s)) == pytest.approx(fd, rel=1e-6)
    assert math.isclose(float(kernel_dt(p, 0.2, 0.3)), 0.0)
