"""Dense solvers for the step subproblems used by the second-order methods.

All three entry points factorize the (symmetric) Hessian once with a
dense eigendecomposition and then work in the eigenbasis:

* ``leftmost_eig``   smallest eigenpair with a fixed sign convention,
* ``solve_tr``       global minimizer of the quadratic model on a ball,
* ``solve_cubic``    global minimizer of the cubic-regularized model.

Both solvers handle the degenerate branch where the gradient has no
component along the leftmost eigenspace (detection threshold
``HARD_CASE_TOL * ||g||``) and certify their output with a KKT residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Array = np.ndarray

DENSE_LIMIT = 500
HARD_CASE_TOL = 1e-12
ROOT_TOL = 1e-13
MAX_ROOT_ITERS = 100


@dataclass(frozen=True)
class TrSolution:
    """Trust-region step: s solves min g's + 0.5 s'Hs over ||s|| <= delta."""

    s: Array
    multiplier: float
    kkt_residual: float
    hard_case: bool
    model_decrease: float
    iterations: int


@dataclass(frozen=True)
class CubicSolution:
    """Cubic-regularized step: s solves min g's + 0.5 s'Hs + (sigma/3)||s||^3."""

    s: Array
    shift: float
    kkt_residual: float
    hard_case: bool
    model_decrease: float
    iterations: int


def _sym_eigh(H) -> tuple[Array, Array, Array]:
    """Validate and factorize a symmetric matrix; returns (w, V, H_sym)."""
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    n = H.shape[0]
    if n > DENSE_LIMIT:
        raise ValueError(f"dense solver limited to n <= {DENSE_LIMIT}, got n = {n}")
    if not np.all(np.isfinite(H)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(H))))
    if float(np.max(np.abs(H - H.T))) > 1e-10 * scale:
        raise ValueError("matrix is not symmetric")
    Hs = 0.5 * (H + H.T)
    w, V = np.linalg.eigh(Hs)
    return w, V, Hs


def _fix_sign(v: Array) -> Array:
    # First component of non-negligible magnitude is made positive.
    tol = 1e-12 * float(np.max(np.abs(v))) if v.size else 0.0
    for vi in v:
        if abs(vi) > tol:
            return v if vi > 0 else -v
    return v


def leftmost_eig(H) -> tuple[float, Array]:
    """Smallest eigenvalue and a unit eigenvector of a symmetric matrix.

    The eigenvector sign is deterministic: its first component of
    non-negligible magnitude is positive.
    """
    w, V, _ = _sym_eigh(H)
    return float(w[0]), _fix_sign(V[:, 0].copy())


def _left_cluster(w: Array) -> Array:
    tol = 1e-10 * max(1.0, float(np.max(np.abs(w))))
    return w <= w[0] + tol


def _shifted_norm(gh: Array, w: Array, mu: float, keep=None) -> float:
    # ||s(mu)|| where s(mu) = -(H + mu I)^{-1} g in the eigenbasis.
    denom = w + mu
    if keep is None:
        with np.errstate(divide="ignore", over="ignore"):
            return float(np.sqrt(np.sum((gh / denom) ** 2)))
    c = np.zeros_like(gh)
    c[keep] = gh[keep] / denom[keep]
    return float(np.sqrt(np.sum(c * c)))


def solve_tr(g, H, delta: float) -> TrSolution:
    """Globally minimize g's + 0.5 s'Hs subject to ||s|| <= delta.

    Returns the minimizer together with the Lagrange multiplier, a KKT
    residual certificate, and the exact model decrease.  In the
    degenerate branch (gradient orthogonal to the leftmost eigenspace
    and interior shifted solution) the boundary solution is completed
    along the deterministic leftmost eigenvector.
    """
    g = np.asarray(g, dtype=float)
    if delta <= 0.0 or not np.isfinite(delta):
        raise ValueError("delta must be a positive finite radius")
    w, V, Hs = _sym_eigh(H)
    if g.shape != (w.size,):
        raise ValueError(f"gradient shape {g.shape} does not match matrix size {w.size}")
    if not np.all(np.isfinite(g)):
        raise ValueError("gradient has non-finite entries")
    gh = V.T @ g
    lam1 = float(w[0])
    gnorm = float(np.linalg.norm(g))

    def finish(coef, mu, hard, iters):
        s = V @ coef
        md = -(float(g @ s) + 0.5 * float(s @ (Hs @ s)))
        kkt = float(np.linalg.norm(Hs @ s + mu * s + g))
        return TrSolution(s, float(mu), kkt, hard, md, iters)

    # Interior solution for positive definite H.
    if lam1 > 0.0 and _shifted_norm(gh, w, 0.0) <= delta:
        return finish(-gh / w, 0.0, False, 0)

    mu_lo = max(0.0, -lam1)
    left = _left_cluster(w)
    g_left = float(np.linalg.norm(gh[left]))
    keep = ~left

    if lam1 <= 0.0 and g_left <= HARD_CASE_TOL * max(1.0, gnorm):
        norm_rest = _shifted_norm(gh, w, mu_lo, keep=keep)
        if norm_rest < delta:
            # Degenerate branch: boundary reached only by adding a
            # leftmost-eigenvector component.
            coef = np.zeros_like(gh)
            coef[keep] = -gh[keep] / (w[keep] + mu_lo)
            alpha = float(np.sqrt(max(delta * delta - norm_rest * norm_rest, 0.0)))
            v1 = _fix_sign(V[:, 0].copy())
            s = V @ coef + alpha * v1
            md = -(float(g @ s) + 0.5 * float(s @ (Hs @ s)))
            kkt = float(np.linalg.norm(Hs @ s + mu_lo * s + g))
            return TrSolution(s, float(mu_lo), kkt, True, md, 0)
        gh = np.where(left, 0.0, gh)  # negligible components, drop for stability

    # Boundary solution: Newton on 1/||s(mu)|| - 1/delta with a
    # bisection bracket [mu_lo, mu_hi].
    lo = mu_lo
    hi = mu_lo + gnorm / delta + 1.0
    while _shifted_norm(gh, w, hi) >= delta and np.isfinite(hi):
        hi = 2.0 * hi + 1.0
    mu = 0.5 * (lo + hi)
    iters = 0
    for iters in range(1, MAX_ROOT_ITERS + 1):
        phi = _shifted_norm(gh, w, mu)
        if abs(phi - delta) <= ROOT_TOL * max(1.0, delta):
            break
        if phi > delta:
            lo = mu
        else:
            hi = mu
        denom = w + mu
        with np.errstate(divide="ignore", over="ignore"):
            dphi_inv = float(np.sum(gh * gh / denom**3)) / phi**3  # d(1/phi)/dmu
        step_ok = np.isfinite(phi) and np.isfinite(dphi_inv) and dphi_inv > 0.0
        if step_ok:
            mu_new = mu - (1.0 / phi - 1.0 / delta) / dphi_inv
        if not step_ok or not (lo < mu_new < hi):
            mu_new = 0.5 * (lo + hi)
        mu = mu_new
    coef = -gh / (w + mu)
    return finish(coef, mu, False, iters)


def solve_cubic(g, H, sigma: float) -> CubicSolution:
    """Globally minimize g's + 0.5 s'Hs + (sigma/3) ||s||^3.

    The global minimizer satisfies (H + sigma ||s|| I) s = -g with
    sigma ||s|| >= max(0, -lambda_min(H)); the scalar unknown
    nu = sigma ||s|| is found by a safeguarded Newton iteration on the
    monotone secular equation.  Ties in the degenerate branch are broken
    along the deterministic leftmost eigenvector.
    """
    g = np.asarray(g, dtype=float)
    if sigma <= 0.0 or not np.isfinite(sigma):
        raise ValueError("sigma must be a positive finite weight")
    w, V, Hs = _sym_eigh(H)
    if g.shape != (w.size,):
        raise ValueError(f"gradient shape {g.shape} does not match matrix size {w.size}")
    if not np.all(np.isfinite(g)):
        raise ValueError("gradient has non-finite entries")
    gh = V.T @ g
    lam1 = float(w[0])
    gnorm = float(np.linalg.norm(g))

    def finish(s, hard, iters):
        r = float(np.linalg.norm(s))
        md = -(float(g @ s) + 0.5 * float(s @ (Hs @ s)) + (sigma / 3.0) * r**3)
        kkt = float(np.linalg.norm(Hs @ s + sigma * r * s + g))
        return CubicSolution(s, sigma * r, kkt, hard, md, iters)

    if gnorm == 0.0 and lam1 >= 0.0:
        return finish(np.zeros_like(g), False, 0)

    nu_lo = max(0.0, -lam1)
    left = _left_cluster(w)
    g_left = float(np.linalg.norm(gh[left]))
    keep = ~left

    if lam1 < 0.0 and g_left <= HARD_CASE_TOL * max(1.0, gnorm):
        norm_rest = _shifted_norm(gh, w, nu_lo, keep=keep)
        r_target = nu_lo / sigma
        if norm_rest < r_target:
            coef = np.zeros_like(gh)
            coef[keep] = -gh[keep] / (w[keep] + nu_lo)
            alpha = float(np.sqrt(max(r_target * r_target - norm_rest * norm_rest, 0.0)))
            v1 = _fix_sign(V[:, 0].copy())
            return finish(V @ coef + alpha * v1, True, 0)
        gh = np.where(left, 0.0, gh)

    # Safeguarded Newton on h(nu) = phi(nu) - nu/sigma (strictly
    # decreasing on [nu_lo, inf)); bracket from a norm bound on the root.
    lo = nu_lo
    hi = nu_lo + 0.5 * (abs(lam1) + np.sqrt(lam1 * lam1 + 4.0 * sigma * gnorm)) + 1.0
    while _shifted_norm(gh, w, hi) - hi / sigma >= 0.0 and np.isfinite(hi):
        hi = 2.0 * hi + 1.0
    nu = 0.5 * (lo + hi)
    iters = 0
    for iters in range(1, MAX_ROOT_ITERS + 1):
        phi = _shifted_norm(gh, w, nu)
        h = phi - nu / sigma
        if abs(h) <= ROOT_TOL * max(1.0, phi):
            break
        if h > 0.0:
            lo = nu
        else:
            hi = nu
        denom = w + nu
        with np.errstate(divide="ignore", over="ignore"):
            dphi = -float(np.sum(gh * gh / denom**3)) / phi if phi > 0 else np.nan
        dh = dphi - 1.0 / sigma
        step_ok = np.isfinite(h) and np.isfinite(dh) and dh < 0.0
        if step_ok:
            nu_new = nu - h / dh
        if not step_ok or not (lo < nu_new < hi):
            nu_new = 0.5 * (lo + hi)
        nu = nu_new
    coef = -gh / (w + nu)
    return finish(V @ coef, False, iters)
