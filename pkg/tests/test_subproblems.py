"""Dense solver contracts: leftmost eigenpair, ball-constrained and
cubic-regularized quadratic models, each checked against slow oracles."""

import math

import numpy as np
import pytest

from regionopt import leftmost_eig, solve_cubic, solve_tr
from regionopt.subproblems import DENSE_LIMIT

from oracles import cubic_oracle_value, leftmost_eig_bisect, tr_oracle_value

RNG = np.random.default_rng(20240817)


def random_symmetric(n, rng, spread=3.0):
    A = rng.standard_normal((n, n))
    return spread * (A + A.T) / 2.0


def random_instances(count, seed, max_n=6):
    """Mixed instance stream: generic, hard-case-prone, PSD, zero-g."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(1, max_n + 1))
        H = random_symmetric(n, rng)
        kind = i % 4
        if kind == 0:
            g = rng.standard_normal(n)
        elif kind == 1:
            # Project g off the leftmost eigenvector to provoke the
            # degenerate boundary branch.
            w, V = np.linalg.eigh(H)
            g = rng.standard_normal(n)
            g -= (g @ V[:, 0]) * V[:, 0]
            if n == 1:
                g = np.zeros(1)
        elif kind == 2:
            H = H @ H.T + 0.1 * np.eye(n)  # positive definite
            g = rng.standard_normal(n)
        else:
            g = np.zeros(n)
        out.append((g, H))
    return out


# ---------------------------------------------------------------------------
# leftmost_eig
# ---------------------------------------------------------------------------


def test_leftmost_eig_pinned_examples():
    val, vec = leftmost_eig(np.diag([2.0, -2.0]))
    assert val == -2.0
    assert vec == pytest.approx([0.0, 1.0], abs=1e-12)
    val, vec = leftmost_eig(np.eye(3))
    assert val == 1.0
    assert abs(np.linalg.norm(vec) - 1.0) <= 1e-12


def test_leftmost_eig_matches_bisection_oracle():
    rng = np.random.default_rng(5)
    for _ in range(25):
        n = int(rng.integers(1, 6))
        H = random_symmetric(n, rng)
        val, vec = leftmost_eig(H)
        ref = leftmost_eig_bisect(H, tol=1e-10)
        assert val == pytest.approx(ref, abs=1e-8)
        # Eigenpair residual and normalization.
        assert np.linalg.norm(H @ vec - val * vec) <= 1e-8 * max(1.0, abs(val))
        assert abs(np.linalg.norm(vec) - 1.0) <= 1e-12


def test_leftmost_eig_sign_convention():
    H = np.diag([-1.0, 3.0])
    _, vec = leftmost_eig(H)
    assert vec[0] > 0.0
    # Same subspace, flipped storage order: sign still deterministic.
    _, vec2 = leftmost_eig(np.diag([3.0, -1.0]))
    assert vec2[1] > 0.0


def test_leftmost_eig_validation():
    with pytest.raises(ValueError, match="square"):
        leftmost_eig(np.ones((2, 3)))
    with pytest.raises(ValueError, match="symmetric"):
        leftmost_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError, match="finite"):
        leftmost_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    with pytest.raises(ValueError, match="dense solver"):
        leftmost_eig(np.eye(DENSE_LIMIT + 1))


# ---------------------------------------------------------------------------
# solve_tr
# ---------------------------------------------------------------------------


def test_solve_tr_interior_example():
    sol = solve_tr(np.array([1.0, 0.0]), np.eye(2), delta=2.0)
    assert sol.s == pytest.approx([-1.0, 0.0], abs=1e-12)
    assert sol.multiplier == 0.0
    assert not sol.hard_case
    assert sol.model_decrease == pytest.approx(0.5, abs=1e-12)


def test_solve_tr_boundary_example():
    sol = solve_tr(np.array([3.0, 0.0]), np.eye(2), delta=1.0)
    assert sol.s == pytest.approx([-1.0, 0.0], abs=1e-10)
    assert sol.multiplier == pytest.approx(2.0, abs=1e-9)
    assert sol.kkt_residual <= 1e-8
    assert sol.model_decrease == pytest.approx(2.5, abs=1e-9)


def test_solve_tr_hard_case_example():
    g = np.array([0.0, 1.0])
    H = np.diag([-2.0, 1.0])
    sol = solve_tr(g, H, delta=1.0)
    assert sol.hard_case
    assert sol.multiplier == pytest.approx(2.0, abs=1e-12)
    assert sol.s == pytest.approx([2.0 * math.sqrt(2.0) / 3.0, -1.0 / 3.0], abs=1e-10)
    assert np.linalg.norm(sol.s) == pytest.approx(1.0, abs=1e-10)
    assert sol.model_decrease == pytest.approx(7.0 / 6.0, abs=1e-10)
    assert sol.model_decrease == pytest.approx(-tr_oracle_value(g, H, 1.0), abs=1e-6)


def test_solve_tr_pure_saddle_moves_along_curvature():
    # Zero gradient, indefinite H: the model still admits a boundary step.
    sol = solve_tr(np.zeros(2), np.diag([1.0, -4.0]), delta=0.5)
    assert sol.hard_case
    assert sol.model_decrease == pytest.approx(0.5, abs=1e-10)  # 0.5*4*0.25


def test_solve_tr_validation():
    with pytest.raises(ValueError, match="delta"):
        solve_tr(np.zeros(2), np.eye(2), delta=0.0)
    with pytest.raises(ValueError, match="shape"):
        solve_tr(np.zeros(3), np.eye(2), delta=1.0)
    with pytest.raises(ValueError, match="finite"):
        solve_tr(np.array([np.inf, 0.0]), np.eye(2), delta=1.0)


@pytest.mark.parametrize("seed", [1, 2])
def test_solve_tr_random_instances_against_oracle(seed):
    rng = np.random.default_rng(seed)
    for g, H in random_instances(60, seed=seed * 101):
        delta = float(10.0 ** rng.uniform(-2, 1))
        sol = solve_tr(g, H, delta)
        n = g.size
        # Feasibility, sign, complementarity, stationarity, PSD shift.
        snorm = float(np.linalg.norm(sol.s))
        assert snorm <= delta * (1.0 + 1e-10)
        assert sol.multiplier >= -1e-12
        scale = max(1.0, float(np.max(np.abs(H))), float(np.linalg.norm(g)))
        assert sol.multiplier * (delta - snorm) <= 1e-6 * scale * delta
        assert sol.kkt_residual <= 1e-8 * scale
        w = np.linalg.eigvalsh(H + sol.multiplier * np.eye(n))
        assert w[0] >= -1e-8 * scale
        assert sol.model_decrease >= -1e-12
        # Global optimality versus the eigenbasis oracle.
        ref = tr_oracle_value(g, H, delta)
        assert -sol.model_decrease == pytest.approx(ref, abs=1e-6 * max(1.0, abs(ref)))


def test_solve_tr_scale_consistency():
    g = np.array([1.0, -2.0])
    H = np.array([[1.0, 0.5], [0.5, -3.0]])
    base = solve_tr(g, H, delta=0.7)
    for c in (10.0, 0.01):
        scaled = solve_tr(c * g, c * H, delta=0.7)
        assert scaled.model_decrease == pytest.approx(c * base.model_decrease, rel=1e-8)
        assert scaled.s == pytest.approx(base.s, abs=1e-8)


def test_solve_tr_deterministic():
    g = np.array([0.3, -1.2, 0.0])
    H = random_symmetric(3, np.random.default_rng(9))
    a = solve_tr(g, H, delta=0.9)
    b = solve_tr(g, H, delta=0.9)
    assert np.array_equal(a.s, b.s)
    assert a.multiplier == b.multiplier
    assert a.model_decrease == b.model_decrease


# ---------------------------------------------------------------------------
# solve_cubic
# ---------------------------------------------------------------------------


def test_solve_cubic_negative_curvature_example():
    sol = solve_cubic(np.zeros(1), np.array([[-1.0]]), sigma=1.0)
    assert sol.s == pytest.approx([1.0], abs=1e-10)  # tie broken toward +
    assert sol.shift == pytest.approx(1.0, abs=1e-10)
    assert sol.model_decrease == pytest.approx(1.0 / 6.0, abs=1e-10)


def test_solve_cubic_convex_example():
    t = (math.sqrt(5.0) - 1.0) / 2.0
    sol = solve_cubic(np.array([1.0]), np.array([[1.0]]), sigma=1.0)
    assert sol.s == pytest.approx([-t], abs=1e-10)
    ref = cubic_oracle_value(np.array([1.0]), np.array([[1.0]]), 1.0)
    assert -sol.model_decrease == pytest.approx(ref, abs=1e-8)


def test_solve_cubic_stationary_psd_is_zero_step():
    sol = solve_cubic(np.zeros(2), np.eye(2), sigma=2.0)
    assert np.array_equal(sol.s, np.zeros(2))
    assert sol.model_decrease == 0.0
    assert sol.shift == 0.0


def test_solve_cubic_validation():
    with pytest.raises(ValueError, match="sigma"):
        solve_cubic(np.zeros(2), np.eye(2), sigma=0.0)
    with pytest.raises(ValueError, match="shape"):
        solve_cubic(np.zeros(3), np.eye(2), sigma=1.0)


@pytest.mark.parametrize("seed", [3, 4])
def test_solve_cubic_random_instances_against_oracle(seed):
    rng = np.random.default_rng(seed)
    for g, H in random_instances(60, seed=seed * 131):
        sigma = float(10.0 ** rng.uniform(-1, 1))
        sol = solve_cubic(g, H, sigma)
        n = g.size
        snorm = float(np.linalg.norm(sol.s))
        scale = max(1.0, float(np.max(np.abs(H))), float(np.linalg.norm(g)))
        # Stationarity (H + sigma||s|| I)s = -g and the shift bound
        # sigma||s|| >= -lambda_min certify a global minimizer.
        assert sol.shift == pytest.approx(sigma * snorm, abs=1e-10 * max(1.0, snorm))
        resid = np.linalg.norm((H + sol.shift * np.eye(n)) @ sol.s + g)
        assert resid <= 1e-8 * scale
        assert sol.kkt_residual <= 1e-8 * scale
        lam1 = float(np.linalg.eigvalsh(H)[0])
        assert sol.shift >= max(0.0, -lam1) - 1e-8 * scale
        assert sol.model_decrease >= -1e-12
        ref = cubic_oracle_value(g, H, sigma, seed=seed)
        assert -sol.model_decrease == pytest.approx(ref, abs=1e-6 * max(1.0, abs(ref)))


def test_solve_cubic_scale_consistency():
    # Scaling (g, H, sigma) by c keeps the minimizer and scales the value.
    g = np.array([0.5, 1.5])
    H = np.array([[2.0, -1.0], [-1.0, -0.5]])
    base = solve_cubic(g, H, sigma=0.8)
    for c in (4.0, 0.25):
        scaled = solve_cubic(c * g, c * H, sigma=c * 0.8)
        assert scaled.s == pytest.approx(base.s, abs=1e-8)
        assert scaled.model_decrease == pytest.approx(c * base.model_decrease, rel=1e-8)


def test_solve_cubic_deterministic():
    g = np.array([0.0, 0.7])
    H = np.diag([-2.0, 1.0])
    a = solve_cubic(g, H, sigma=1.3)
    b = solve_cubic(g, H, sigma=1.3)
    assert np.array_equal(a.s, b.s)
    assert a.shift == b.shift
